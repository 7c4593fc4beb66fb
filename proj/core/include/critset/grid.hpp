#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "critset/bits.hpp"

namespace critset {

/// Box geometry. Rows are grouped into bands of `box_rows` rows and columns
/// into stacks of `box_cols` columns; the side length is their product.
struct GridShape {
  int box_rows = 3;
  int box_cols = 3;

  [[nodiscard]] constexpr int side() const { return box_rows * box_cols; }
  [[nodiscard]] constexpr int cell_count() const { return side() * side(); }
  [[nodiscard]] constexpr int band_count() const { return box_cols; }   // bands of box_rows rows
  [[nodiscard]] constexpr int stack_count() const { return box_rows; }  // stacks of box_cols columns

  [[nodiscard]] constexpr int row(int c) const { return c / side(); }
  [[nodiscard]] constexpr int col(int c) const { return c % side(); }
  [[nodiscard]] constexpr int box(int c) const {
    return (row(c) / box_rows) * box_rows + col(c) / box_cols;
  }
  [[nodiscard]] constexpr int cell(int r, int c) const { return r * side() + c; }

  [[nodiscard]] std::string name() const;  // e.g. "3x3"

  friend constexpr bool operator==(const GridShape&, const GridShape&) = default;

  static constexpr GridShape s4x4() { return {2, 2}; }
  static constexpr GridShape s6x6() { return {2, 3}; }
  static constexpr GridShape s9x9() { return {3, 3}; }
};

inline constexpr int kMaxSide = 9;
inline constexpr int kMaxCells = kMaxSide * kMaxSide;

/// Throws if the shape is outside the supported range (boxes >= 2, side <= 9).
void validate_shape(const GridShape& shape);

/// Parses "RxC" box geometry ("2x2", "2x3", "3x3") or grid-side names "4x4",
/// "6x6", "9x9".
GridShape parse_shape(std::string_view text);

/// Default shape for a text line of `length` characters.
std::optional<GridShape> shape_for_length(std::size_t length);

int cell_row(const GridShape& shape, int c);
int cell_col(const GridShape& shape, int c);
int cell_box(const GridShape& shape, int c);

class GridError : public std::runtime_error {
 public:
  enum class Kind { kWrongLength, kIllegalCharacter, kRuleViolation, kContradiction, kShape };
  GridError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A completed solution grid. Digits are 1..n, row-major.
class Grid {
 public:
  Grid() = default;
  /// Validates sudoku rules; throws GridError(kRuleViolation) otherwise.
  Grid(GridShape shape, std::span<const std::uint8_t> digits);

  /// Skips rule validation. For raw search output that is checked separately.
  static Grid unchecked(GridShape shape, std::span<const std::uint8_t> digits);

  [[nodiscard]] const GridShape& shape() const { return shape_; }
  [[nodiscard]] int at(int c) const { return digits_[static_cast<std::size_t>(c)]; }
  [[nodiscard]] int at(int r, int c) const { return at(shape_.cell(r, c)); }
  [[nodiscard]] std::span<const std::uint8_t> digits() const {
    return {digits_.data(), static_cast<std::size_t>(shape_.cell_count())};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.shape_ == b.shape_ && a.digits_ == b.digits_;
  }
  friend std::strong_ordering operator<=>(const Grid& a, const Grid& b) {
    return a.digits_ <=> b.digits_;
  }

 private:
  GridShape shape_;
  std::array<std::uint8_t, kMaxCells> digits_{};
};

/// True iff every row, column and box of `digits` is a permutation of 1..n.
bool is_valid_grid(const GridShape& shape, std::span<const std::uint8_t> digits);

/// A set of cells of one shape.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(GridShape shape) : shape_(shape) {}
  CellSet(GridShape shape, CellMask mask);
  CellSet(GridShape shape, std::span<const int> cells);

  static CellSet all(GridShape shape) { return {shape, CellMask::low_bits(shape.cell_count())}; }

  [[nodiscard]] const GridShape& shape() const { return shape_; }
  [[nodiscard]] const CellMask& mask() const { return mask_; }
  [[nodiscard]] int size() const { return mask_.count(); }
  [[nodiscard]] bool empty() const { return mask_.empty(); }
  [[nodiscard]] bool contains(int c) const { return mask_.test(c); }
  [[nodiscard]] std::vector<int> cells() const { return mask_.indices(); }

  void insert(int c);
  void erase(int c) { mask_.reset(c); }

  /// Complement within the shape's cells.
  [[nodiscard]] CellSet complement() const;

  friend bool operator==(const CellSet&, const CellSet&) = default;

 private:
  GridShape shape_;
  CellMask mask_;
};

/// Digit array with 0 for blanks; the solver's input.
struct Givens {
  GridShape shape;
  std::array<std::uint8_t, kMaxCells> digits{};

  static Givens from_clues(const Grid& g, const CellMask& clues);
  [[nodiscard]] int clue_count() const;
};

/// Clue set taken from a known solution grid.
class Puzzle {
 public:
  Puzzle(Grid grid, CellSet clues);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] const CellSet& clues() const { return clues_; }
  [[nodiscard]] Givens givens() const { return Givens::from_clues(grid_, clues_.mask()); }

 private:
  Grid grid_;
  CellSet clues_;
};

/// Parses one grid line; the shape is inferred from the length unless given.
Grid parse_grid(std::string_view line, std::optional<GridShape> shape = std::nullopt);
std::string format_grid(const Grid& g);

/// Parses a puzzle line ('0' or '.' blank) whose givens must agree with `solution`.
Puzzle parse_puzzle(std::string_view line, const Grid& solution);

/// Parses a puzzle line without a reference solution.
Givens parse_givens(std::string_view line, std::optional<GridShape> shape = std::nullopt);
std::string format_givens(const Givens& g);

/// Comma-separated ascending cell indices.
std::string format_cells(const CellMask& m);
CellMask parse_cells(std::string_view text);

}  // namespace critset
