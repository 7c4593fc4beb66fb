#pragma once

// Enumeration of all k-element hitting sets for a family of cell sets, with
// optional higher-degree families used only for pruning.
//
// Terminology used throughout:
//  - level j: number of elements drawn so far on the current branch;
//  - hitting vector of cell c (per degree): slot i set iff c is in set i;
//  - state vector (per degree, per level): slot i set iff set i is hit;
//  - dead cells: cells excluded on the current branch; drawing c from a set
//    kills every member of that set up to and including c, which makes every
//    hitting set come out exactly once.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "critset/bits.hpp"

namespace critset {

struct HittingInstance {
  int universe_size = 0;
  int k = 1;
  /// degree -> member sets. Degree 1 holds the sets to hit, ideally sorted by
  /// ascending size. Degree d >= 2 sets must need at least d elements from
  /// any k-set that hits every degree-1 member; they only prune.
  std::map<int, std::vector<CellMask>> families;

  /// Throws std::invalid_argument on a malformed instance.
  void validate() const;
  [[nodiscard]] const std::vector<CellMask>& degree_one() const;
};

/// Membership table: one row of `bits` slots per universe element.
struct HitTable {
  int universe = 0;
  std::size_t bits = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> data;

  HitTable() = default;
  HitTable(int universe, std::size_t bits);

  [[nodiscard]] std::span<std::uint64_t> row(int c) {
    return {data.data() + static_cast<std::size_t>(c) * words, words};
  }
  [[nodiscard]] std::span<const std::uint64_t> row(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * words, words};
  }
  [[nodiscard]] bool test(int c, std::size_t slot) const { return (row(c)[slot >> 6] >> (slot & 63)) & 1u; }
};

HitTable make_hit_table(int universe, std::span<const CellMask> sets);

/// Hitting vectors for every degree of the instance.
std::map<int, HitTable> init_hitting_vectors(const HittingInstance& instance);

/// Gathers the bits of `bits` found at the zero slots of `mask`, packed to
/// the low end (slot 0 = least significant bit), zero-padded.
std::uint8_t con8(std::uint8_t mask, std::uint8_t bits);
/// Same function by direct bit-by-bit evaluation, for cross-checking.
std::uint8_t con8_reference(std::uint8_t mask, std::uint8_t bits);

struct Consolidated {
  HitTable table;
  /// index_map[j] = original slot of new slot j.
  std::vector<std::uint32_t> index_map;
  /// Number of unhit slots before truncation to the cap.
  std::size_t unhit = 0;
};

/// Keeps, in order, the slots where `state` is 0, at most `cap` of them.
Consolidated consolidate(std::span<const std::uint64_t> state, const HitTable& table, std::size_t cap);

/// Cells of `set` that are not dead.
int effective_size(const CellMask& set, const CellMask& dead);

struct SelectionSchedule {
  /// Levels below this scan every unhit set for the minimum effective size.
  int full_scan_until = 10;
  /// At this level, scan the unhit sets among the first `window` indices.
  int window_level = 10;
  std::size_t window = 64;
  /// At this level, scan the first `unhit_count` unhit sets.
  int unhit_level = 11;
  std::size_t unhit_count = 5;
  // Any other level takes the first unhit set.

  static SelectionSchedule for_k(int k);
  /// Always the first unhit set.
  static SelectionSchedule first_unhit();
};

struct Selection {
  enum class Kind { kAllHit, kCut, kChosen };
  Kind kind = Kind::kAllHit;
  std::size_t index = 0;
  int effective = 0;
};

/// Picks the set to draw the next element from. Ties go to the lowest index.
/// A chosen set with no live cells is reported as a cut.
Selection select_set(int level, std::span<const CellMask> sets, std::span<const std::uint64_t> state,
                     const CellMask& dead, const SelectionSchedule& schedule, bool use_effective_size);

struct ConsolidationStep {
  int trigger_level = 0;  // consolidate once this many elements are drawn
  std::size_t cap = 0;
};

struct EngineConfig {
  bool enable_dedup = true;
  bool enable_degree_pruning = true;
  bool enable_consolidation = true;
  bool enable_effective_size = true;

  std::map<int, ConsolidationStep> consolidation;  // per degree
  /// Level at which degree d is checked; defaults to k - d + 1.
  std::map<int, int> pruning_levels;
  SelectionSchedule selection;

  /// Defaults for 9x9 with k = 16, shifted proportionally for other k.
  static EngineConfig defaults_for(int k);
  /// The plain once-only algorithm: no pruning, consolidation or effective size.
  static EngineConfig baseline();

  /// Throws std::invalid_argument on caps < 1 or trigger levels >= k.
  void validate(int k) const;
  [[nodiscard]] int check_level(int degree, int k) const;
};

struct EngineStats {
  std::uint64_t nodes = 0;
  std::uint64_t emitted = 0;
  std::uint64_t pruned_by_degree = 0;
  std::uint64_t cut_dead = 0;
  std::uint64_t consolidations = 0;
};

using HittingSink = std::function<void(const CellMask&)>;

/// Emits every k-subset of the universe hitting all degree-1 members, each
/// exactly once, in a deterministic order. Single-threaded; the sink must not
/// re-enter the engine.
EngineStats enumerate_hitting_sets(const HittingInstance& instance, const EngineConfig& config,
                                   const HittingSink& sink);

inline constexpr std::uint64_t kBruteForceBudget = 10'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All hitting sets by enumerating every k-subset, sorted in ascending
/// cell-index order. Throws BudgetExceeded past `budget` subsets.
std::vector<CellMask> brute_force_hitting_sets(const HittingInstance& instance,
                                               std::uint64_t budget = kBruteForceBudget);

/// Generic instance text: "universe k" then "d: c1,c2,..." per set.
HittingInstance parse_instance(std::string_view text);
std::string format_instance(const HittingInstance& instance);

}  // namespace critset
