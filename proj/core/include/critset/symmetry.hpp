#pragma once

// Equivalence transformations of solution grids, minlex canonical forms and
// small-shape catalogues.
//
// Minlex convention: the group is digit relabelling x band-preserving row
// permutations x stack-preserving column permutations, plus transposition
// when the boxes are square. Rectangular-box shapes (6x6 with 2x3 boxes) do
// not include transposition because it turns 2x3 boxes into 3x2 boxes; their
// catalogue therefore has more representatives than the community count
// under the extended group, but every class is still covered.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "critset/grid.hpp"

namespace critset {

struct Transformation {
  GridShape shape;
  /// digit_perm[d-1] is the image of digit d (values 1..n).
  std::vector<std::uint8_t> digit_perm;
  /// Source row r lands in row row_perm[r]; likewise for columns.
  std::vector<std::uint8_t> row_perm;
  std::vector<std::uint8_t> col_perm;
  bool transpose = false;

  static Transformation identity(const GridShape& shape);
  static Transformation random(const GridShape& shape, std::mt19937_64& rng);

  /// Throws std::invalid_argument unless all components are permutations,
  /// rows keep bands, columns keep stacks and transposition is only set on
  /// square boxes.
  void validate() const;

  [[nodiscard]] Transformation inverse() const;

  /// Image of a cell index under the positional part.
  [[nodiscard]] int map_cell(int c) const;

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

/// Transpose first, then rows and columns, then digits.
Grid apply(const Transformation& t, const Grid& g);
CellMask apply(const Transformation& t, const CellMask& cells);

/// All band-preserving row permutations (stack-preserving column permutations
/// when `columns` is set), in a fixed order.
std::vector<std::vector<std::uint8_t>> line_permutations(const GridShape& shape, bool columns);

/// Number of cell permutations in the group (digit relabelling excluded).
std::uint64_t group_size(const GridShape& shape);

struct CanonicalForm {
  Grid grid;
};

CanonicalForm minlex(const Grid& g);

/// Relabels digits so they first appear in the order 1, 2, 3, ...
Grid normalize_digits(const Grid& g);

struct CatalogSummary {
  std::uint64_t total_completions = 0;
  std::uint64_t representatives = 0;
};

/// Emits each class representative of a 4x4 or 6x6 shape once, in ascending
/// order, each in minlex form. Throws std::invalid_argument on other shapes.
CatalogSummary catalog(const GridShape& shape, const std::function<void(const Grid&)>& sink);

/// Calls `visit` for every completed grid whose first row is 1..n, in
/// lexicographic order. Returns the number visited.
std::uint64_t enumerate_normalized_grids(const GridShape& shape, const std::function<void(const Grid&)>& visit);

/// Counts all completed grids by exhaustive filling (no symmetry shortcut).
std::uint64_t count_all_grids(const GridShape& shape);

/// Checks prod_{i<C-1}(n+2i) < total < prod_{i<C}(n+2i) with exact integers.
/// `total` is a decimal string; throws std::invalid_argument if malformed.
bool verify_scs_bracket(int side, const std::string& total, int claimed_scs);

}  // namespace critset
