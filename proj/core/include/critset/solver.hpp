#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "critset/grid.hpp"

namespace critset {

/// Givens that break a sudoku rule on their own (duplicate digit in a unit).
class InconsistentGivens : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolveOutcome {
  /// Completions found, saturating at the requested limit.
  int count = 0;
  /// The first (up to) two completions in discovery order.
  std::vector<Grid> completions;
};

/// Completion counter for one grid shape: naked and hidden singles, then
/// guessing on the blank with the fewest candidates (lowest index on ties),
/// trying digits in ascending order. Instances are immutable after
/// construction and may be shared between threads.
class Solver {
 public:
  explicit Solver(GridShape shape);

  [[nodiscard]] const GridShape& shape() const { return shape_; }

  /// Throws InconsistentGivens when two givens clash, std::invalid_argument
  /// for limit < 1 or a shape mismatch.
  [[nodiscard]] SolveOutcome count_completions(const Givens& givens, int limit = 2) const;

  /// Fills `givens` with digits drawn in random order; returns nullopt if no
  /// completion exists.
  [[nodiscard]] std::optional<Grid> random_completion(const Givens& givens, std::mt19937_64& rng) const;

 private:
  struct State;
  struct Search;

  GridShape shape_;
  int n_ = 0;
  int cells_ = 0;
  std::uint16_t full_ = 0;
  std::vector<std::uint8_t> peers_;     // cells_ * peer_count_
  int peer_count_ = 0;
  std::vector<std::uint8_t> units_;     // 3n units of n cells
  std::vector<std::uint8_t> cell_units_;  // 3 per cell: row, col, box unit ids
};

/// Shared solver for the standard shapes (constructed on first use).
const Solver& solver_for(const GridShape& shape);

SolveOutcome count_completions(const Givens& givens, int limit = 2);

/// True iff the clue set has exactly one completion (which must then be the
/// puzzle's own grid).
bool is_proper(const Puzzle& p);

/// Safety check for a multi-completion verdict: both saved completions extend
/// the givens, are valid grids, and differ.
bool verify_two_completions(const Givens& givens, const SolveOutcome& outcome);

/// Uniformly-ish random solution grid of the given shape.
Grid random_grid(const GridShape& shape, std::mt19937_64& rng);

}  // namespace critset
