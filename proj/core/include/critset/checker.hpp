#pragma once

// Per-grid search for k-clue proper puzzles: minimal unavoidable sets, then
// hitting sets of those, then a uniqueness check on each hitting set.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "critset/grid.hpp"
#include "critset/hitting.hpp"

namespace critset {

/// Bumped whenever a default changes the candidate stream.
inline constexpr int kCheckerVersion = 1;

struct SearchConfig {
  /// Largest minimal unavoidable set collected.
  int max_set_size = 12;
  /// Degree-1 sets kept (the smallest ones).
  std::size_t degree_one_cap = 384;
  /// Clique sizes turned into pruning families.
  std::vector<int> clique_degrees{2, 3, 4, 5};
  std::map<int, std::size_t> clique_caps;
  /// Explicit clique start offsets; missing degrees use default_clique_start.
  std::map<int, std::size_t> clique_starts;
  /// Re-run each found set's complement through the solver before use.
  bool verify_sets = true;
  EngineConfig engine;

  static SearchConfig defaults_for(const GridShape& shape, int k);
  /// Plain enumeration over the degree-1 family only.
  static SearchConfig baseline(const GridShape& shape, int k);

  void validate(int k) const;
  /// Flat key=value lines, sorted by key.
  [[nodiscard]] std::string to_text() const;
};

int default_max_set_size(const GridShape& shape);
std::size_t default_clique_cap(int degree);
/// Skip offset for degree-d cliques over a family of m sets.
std::size_t default_clique_start(int degree, int k, std::size_t m);

struct GridSearchReport {
  std::string grid;
  int k = 0;
  std::size_t minimal_sets_found = 0;
  std::uint64_t candidates = 0;
  std::vector<CellMask> proper_puzzles;  // ascending cell-index order
  std::int64_t elapsed_ms = 0;
  std::uint64_t safety_failures = 0;
  EngineStats engine;

  [[nodiscard]] std::size_t proper_found() const { return proper_puzzles.size(); }
};

GridSearchReport search_grid(const Grid& g, int k, const SearchConfig& config);
/// Same, with the per-shape defaults.
GridSearchReport search_grid(const Grid& g, int k);

/// `grid<TAB>k<TAB>minimal_sets<TAB>candidates<TAB>proper<TAB>millis`, then one
/// tab-indented line of clue indices per proper puzzle. A trailing
/// `<TAB>safety_failures=N` column is added only when N > 0.
std::string format_report(const GridSearchReport& r);
/// Same without the elapsed time, for comparing runs.
std::string format_report_stable(const GridSearchReport& r);
std::string report_header(const SearchConfig& config, int k);

struct CatalogRecord {
  std::size_t line_no = 0;
  std::optional<GridSearchReport> report;
  std::string error;  // set when the line did not parse
};

std::string format_record(const CatalogRecord& r);

/// One record per non-blank input line, in input order.
void search_catalog(std::istream& in, int k, const std::function<SearchConfig(const GridShape&)>& config_for,
                    const std::function<void(const CatalogRecord&)>& sink);

/// Every k-subset of the grid's cells with a unique completion, by brute
/// force. Throws BudgetExceeded when C(cells, k) is past `budget`.
std::vector<CellMask> brute_force_proper(const Grid& g, int k, std::uint64_t budget = kBruteForceBudget);

}  // namespace critset
