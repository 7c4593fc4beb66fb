#include "critset/grid.hpp"

#include <algorithm>
#include <charconv>

namespace critset {

std::string GridShape::name() const {
  return std::to_string(box_rows) + "x" + std::to_string(box_cols);
}

void validate_shape(const GridShape& shape) {
  if (shape.box_rows < 2 || shape.box_cols < 2 || shape.side() > kMaxSide)
    throw GridError(GridError::Kind::kShape, "unsupported box shape " + shape.name());
}

GridShape parse_shape(std::string_view text) {
  auto x = text.find('x');
  if (x == std::string_view::npos) throw GridError(GridError::Kind::kShape, "bad shape '" + std::string(text) + "'");
  int a = 0, b = 0;
  auto l = text.substr(0, x), r = text.substr(x + 1);
  if (std::from_chars(l.data(), l.data() + l.size(), a).ec != std::errc{} ||
      std::from_chars(r.data(), r.data() + r.size(), b).ec != std::errc{})
    throw GridError(GridError::Kind::kShape, "bad shape '" + std::string(text) + "'");
  GridShape s;
  if (a == b && a == 4) s = GridShape::s4x4();
  else if (a == b && a == 6) s = GridShape::s6x6();
  else if (a == b && a == 8) s = GridShape{2, 4};
  else if (a == b && a == 9) s = GridShape::s9x9();
  else s = GridShape{a, b};
  validate_shape(s);
  return s;
}

std::optional<GridShape> shape_for_length(std::size_t length) {
  switch (length) {
    case 16: return GridShape::s4x4();
    case 36: return GridShape::s6x6();
    case 64: return GridShape{2, 4};
    case 81: return GridShape::s9x9();
    default: return std::nullopt;
  }
}

namespace {
void check_cell(const GridShape& shape, int c) {
  if (c < 0 || c >= shape.cell_count())
    throw std::out_of_range("cell index " + std::to_string(c) + " out of range");
}
}  // namespace

int cell_row(const GridShape& shape, int c) { check_cell(shape, c); return shape.row(c); }
int cell_col(const GridShape& shape, int c) { check_cell(shape, c); return shape.col(c); }
int cell_box(const GridShape& shape, int c) { check_cell(shape, c); return shape.box(c); }

bool is_valid_grid(const GridShape& shape, std::span<const std::uint8_t> digits) {
  const int n = shape.side();
  if (static_cast<int>(digits.size()) != shape.cell_count()) return false;
  std::array<std::uint16_t, kMaxSide> rows{}, cols{}, boxes{};
  for (int c = 0; c < shape.cell_count(); ++c) {
    int d = digits[static_cast<std::size_t>(c)];
    if (d < 1 || d > n) return false;
    auto bit = static_cast<std::uint16_t>(1u << (d - 1));
    auto& r = rows[static_cast<std::size_t>(shape.row(c))];
    auto& k = cols[static_cast<std::size_t>(shape.col(c))];
    auto& b = boxes[static_cast<std::size_t>(shape.box(c))];
    if ((r | k | b) & bit) return false;
    r |= bit;
    k |= bit;
    b |= bit;
  }
  return true;
}

Grid::Grid(GridShape shape, std::span<const std::uint8_t> digits) : shape_(shape) {
  validate_shape(shape);
  if (static_cast<int>(digits.size()) != shape.cell_count())
    throw GridError(GridError::Kind::kWrongLength, "digit count does not match shape");
  if (!is_valid_grid(shape, digits))
    throw GridError(GridError::Kind::kRuleViolation, "grid violates sudoku rules");
  std::copy(digits.begin(), digits.end(), digits_.begin());
}

Grid Grid::unchecked(GridShape shape, std::span<const std::uint8_t> digits) {
  Grid g;
  g.shape_ = shape;
  std::copy_n(digits.begin(), std::min<std::size_t>(digits.size(), kMaxCells), g.digits_.begin());
  return g;
}

CellSet::CellSet(GridShape shape, CellMask mask) : shape_(shape), mask_(mask) {
  if (!mask.subset_of(CellMask::low_bits(shape.cell_count())))
    throw std::out_of_range("cell mask exceeds shape");
}

CellSet::CellSet(GridShape shape, std::span<const int> cells) : shape_(shape) {
  for (int c : cells) insert(c);
}

void CellSet::insert(int c) {
  check_cell(shape_, c);
  mask_.set(c);
}

CellSet CellSet::complement() const {
  return {shape_, ~mask_ & CellMask::low_bits(shape_.cell_count())};
}

Givens Givens::from_clues(const Grid& g, const CellMask& clues) {
  Givens out;
  out.shape = g.shape();
  clues.for_each([&](int c) { out.digits[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(g.at(c)); });
  return out;
}

int Givens::clue_count() const {
  int n = 0;
  for (int c = 0; c < shape.cell_count(); ++c) n += digits[static_cast<std::size_t>(c)] != 0;
  return n;
}

Puzzle::Puzzle(Grid grid, CellSet clues) : grid_(std::move(grid)), clues_(clues) {
  if (!(clues_.shape() == grid_.shape()))
    throw GridError(GridError::Kind::kShape, "clue set shape differs from grid shape");
}

namespace {

GridShape resolve_shape(std::string_view line, std::optional<GridShape> shape) {
  if (shape) {
    validate_shape(*shape);
    if (line.size() != static_cast<std::size_t>(shape->cell_count()))
      throw GridError(GridError::Kind::kWrongLength,
                      "expected " + std::to_string(shape->cell_count()) + " characters, got " +
                          std::to_string(line.size()));
    return *shape;
  }
  auto s = shape_for_length(line.size());
  if (!s)
    throw GridError(GridError::Kind::kWrongLength,
                    "line length " + std::to_string(line.size()) + " matches no grid shape");
  return *s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

Grid parse_grid(std::string_view line, std::optional<GridShape> shape) {
  line = trim(line);
  GridShape s = resolve_shape(line, shape);
  std::array<std::uint8_t, kMaxCells> d{};
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (ch < '1' || ch > '0' + s.side())
      throw GridError(GridError::Kind::kIllegalCharacter,
                      "illegal character '" + std::string(1, ch) + "' at position " + std::to_string(i));
    d[i] = static_cast<std::uint8_t>(ch - '0');
  }
  return Grid(s, std::span<const std::uint8_t>(d.data(), line.size()));
}

std::string format_grid(const Grid& g) {
  std::string out;
  out.reserve(static_cast<std::size_t>(g.shape().cell_count()));
  for (auto d : g.digits()) out.push_back(static_cast<char>('0' + d));
  return out;
}

Givens parse_givens(std::string_view line, std::optional<GridShape> shape) {
  line = trim(line);
  Givens out;
  out.shape = resolve_shape(line, shape);
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (ch == '.' || ch == '0') continue;
    if (ch < '1' || ch > '0' + out.shape.side())
      throw GridError(GridError::Kind::kIllegalCharacter,
                      "illegal character '" + std::string(1, ch) + "' at position " + std::to_string(i));
    out.digits[i] = static_cast<std::uint8_t>(ch - '0');
  }
  return out;
}

std::string format_givens(const Givens& g) {
  std::string out;
  for (int c = 0; c < g.shape.cell_count(); ++c) {
    auto d = g.digits[static_cast<std::size_t>(c)];
    out.push_back(d ? static_cast<char>('0' + d) : '.');
  }
  return out;
}

Puzzle parse_puzzle(std::string_view line, const Grid& solution) {
  Givens g = parse_givens(line, solution.shape());
  CellSet clues(solution.shape());
  for (int c = 0; c < solution.shape().cell_count(); ++c) {
    int d = g.digits[static_cast<std::size_t>(c)];
    if (d == 0) continue;
    if (d != solution.at(c))
      throw GridError(GridError::Kind::kContradiction,
                      "clue at cell " + std::to_string(c) + " contradicts the solution grid");
    clues.insert(c);
  }
  return Puzzle(solution, clues);
}

std::string format_cells(const CellMask& m) {
  std::string out;
  m.for_each([&](int c) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(c);
  });
  return out;
}

CellMask parse_cells(std::string_view text) {
  CellMask m;
  text = trim(text);
  while (!text.empty()) {
    auto comma = text.find(',');
    auto tok = trim(text.substr(0, comma));
    int v = -1;
    if (tok.empty() || std::from_chars(tok.data(), tok.data() + tok.size(), v).ec != std::errc{} || v < 0 ||
        v >= CellMask::kCapacity)
      throw std::invalid_argument("bad cell index '" + std::string(tok) + "'");
    m.set(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return m;
}

}  // namespace critset
