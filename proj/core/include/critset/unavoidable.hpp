#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "critset/grid.hpp"

namespace critset {

struct UnavoidableSet {
  CellSet cells;
  int degree = 1;
};

/// Unavoidable sets of one degree in ascending size order (ties in ascending
/// cell-index order).
struct UnavoidableFamily {
  GridShape shape;
  int degree = 1;
  std::vector<CellMask> sets;
  /// Maximum number of members kept; 0 means unbounded.
  std::size_t cap = 0;

  [[nodiscard]] std::size_t size() const { return sets.size(); }
  [[nodiscard]] UnavoidableSet at(std::size_t i) const { return {CellSet(shape, sets[i]), degree}; }
  /// Keeps the first `n` members (the smallest, given the ordering).
  void truncate(std::size_t n);
};

/// Ascending size, then ascending cell-index sequence.
bool family_order_less(const CellMask& a, const CellMask& b);

/// The complement of `x` has at least two completions.
bool is_unavoidable(const Grid& g, const CellMask& x);
bool is_unavoidable(const Grid& g, const CellSet& x);

/// No one-cell removal stays unavoidable (sufficient by superset monotonicity).
bool is_minimal(const Grid& g, const CellMask& u);

/// All minimal unavoidable sets of `g` with at most `max_size` cells.
///
/// For each digit subset D, the cells of `g` holding digits of D are refilled
/// with D row by row, every other cell fixed, and each refill differing from
/// `g` in at most `max_size` cells (and moving every digit of D) yields a
/// candidate: the set of changed cells. Candidates are then filtered to the
/// subset-minimal ones.
UnavoidableFamily find_minimal_unavoidable(const Grid& g, int max_size = 12);

class DegreeBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDegreeCombinationBudget = 1'000'000;

/// True iff removing any `degree - 1` cells of `u` leaves an unavoidable set.
/// Throws DegreeBudgetExceeded when C(#u, degree-1) exceeds the budget.
bool verify_degree(const Grid& g, const CellMask& u, int degree,
                   std::uint64_t budget = kDegreeCombinationBudget);

/// Unions of `d` pairwise-disjoint members of a degree-1 family. Indices are
/// scanned as nested loops i0 > i1 > ... with i_t >= start - t, outer index
/// ascending first; stops after `cap` unions.
UnavoidableFamily build_cliques(const UnavoidableFamily& family, int d, std::size_t start, std::size_t cap);

/// Some digit occurs twice among the cells of `u` inside one band.
bool digit_twice_in_band(const Grid& g, const CellMask& u);

/// Bounded search over the symmetry group for a placement of `u` with a digit
/// twice in one band. Only the transposition component changes which cells
/// share a band, so the search covers the identity and the transpose.
bool blueprint_property_holds(const Grid& g, const CellMask& u);

/// Lemma checks for a minimal set: every digit occurs at least twice, and
/// every row, column and box meets it in zero or at least two cells.
bool digits_occur_twice(const Grid& g, const CellMask& u);
bool unit_intersections_ok(const GridShape& shape, const CellMask& u);

}  // namespace critset
