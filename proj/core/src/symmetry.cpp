#include "critset/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace critset {

namespace {

std::vector<std::uint8_t> iota_perm(int n) {
  std::vector<std::uint8_t> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  return p;
}

bool is_permutation_of_range(const std::vector<std::uint8_t>& p, int lo, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (auto v : p) {
    int k = v - lo;
    if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)]) return false;
    seen[static_cast<std::size_t>(k)] = true;
  }
  return true;
}

std::vector<std::uint8_t> invert(const std::vector<std::uint8_t>& p, int base) {
  std::vector<std::uint8_t> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    inv[static_cast<std::size_t>(p[i] - base)] = static_cast<std::uint8_t>(i + static_cast<std::size_t>(base));
  return inv;
}

// Lines are grouped in blocks of `width`; `blocks` blocks in total.
std::vector<std::vector<std::uint8_t>> block_permutations(int width, int blocks) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<int> block_order(static_cast<std::size_t>(blocks));
  std::iota(block_order.begin(), block_order.end(), 0);
  std::vector<int> inner(static_cast<std::size_t>(width));
  std::iota(inner.begin(), inner.end(), 0);
  std::vector<std::vector<int>> inner_perms;
  do inner_perms.push_back(inner);
  while (std::next_permutation(inner.begin(), inner.end()));

  std::size_t combos = 1;
  for (int b = 0; b < blocks; ++b) combos *= inner_perms.size();
  do {
    for (std::size_t k = 0; k < combos; ++k) {
      std::vector<std::uint8_t> perm(static_cast<std::size_t>(width * blocks));
      std::size_t code = k;
      for (int b = 0; b < blocks; ++b) {
        const auto& ip = inner_perms[code % inner_perms.size()];
        code /= inner_perms.size();
        for (int i = 0; i < width; ++i)
          perm[static_cast<std::size_t>(b * width + i)] =
              static_cast<std::uint8_t>(block_order[static_cast<std::size_t>(b)] * width + ip[static_cast<std::size_t>(i)]);
      }
      out.push_back(std::move(perm));
    }
  } while (std::next_permutation(block_order.begin(), block_order.end()));
  return out;
}

}  // namespace

Transformation Transformation::identity(const GridShape& shape) {
  Transformation t;
  t.shape = shape;
  const int n = shape.side();
  t.digit_perm.resize(static_cast<std::size_t>(n));
  std::iota(t.digit_perm.begin(), t.digit_perm.end(), std::uint8_t{1});
  t.row_perm = iota_perm(n);
  t.col_perm = iota_perm(n);
  return t;
}

Transformation Transformation::random(const GridShape& shape, std::mt19937_64& rng) {
  Transformation t = identity(shape);
  std::shuffle(t.digit_perm.begin(), t.digit_perm.end(), rng);
  auto shuffle_blocks = [&](std::vector<std::uint8_t>& p, int width, int blocks) {
    std::vector<int> order(static_cast<std::size_t>(blocks));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int b = 0; b < blocks; ++b) {
      std::vector<int> inner(static_cast<std::size_t>(width));
      std::iota(inner.begin(), inner.end(), 0);
      std::shuffle(inner.begin(), inner.end(), rng);
      for (int i = 0; i < width; ++i)
        p[static_cast<std::size_t>(b * width + i)] =
            static_cast<std::uint8_t>(order[static_cast<std::size_t>(b)] * width + inner[static_cast<std::size_t>(i)]);
    }
  };
  shuffle_blocks(t.row_perm, shape.box_rows, shape.band_count());
  shuffle_blocks(t.col_perm, shape.box_cols, shape.stack_count());
  if (shape.box_rows == shape.box_cols) t.transpose = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  return t;
}

void Transformation::validate() const {
  validate_shape(shape);
  const int n = shape.side();
  if (!is_permutation_of_range(digit_perm, 1, n)) throw std::invalid_argument("digit_perm is not a permutation of 1..n");
  if (!is_permutation_of_range(row_perm, 0, n)) throw std::invalid_argument("row_perm is not a permutation");
  if (!is_permutation_of_range(col_perm, 0, n)) throw std::invalid_argument("col_perm is not a permutation");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i / shape.box_rows == j / shape.box_rows &&
          row_perm[static_cast<std::size_t>(i)] / shape.box_rows != row_perm[static_cast<std::size_t>(j)] / shape.box_rows)
        throw std::invalid_argument("row_perm does not preserve bands");
      if (i / shape.box_cols == j / shape.box_cols &&
          col_perm[static_cast<std::size_t>(i)] / shape.box_cols != col_perm[static_cast<std::size_t>(j)] / shape.box_cols)
        throw std::invalid_argument("col_perm does not preserve stacks");
    }
  if (transpose && shape.box_rows != shape.box_cols)
    throw std::invalid_argument("transpose requires square boxes");
}

Transformation Transformation::inverse() const {
  Transformation t;
  t.shape = shape;
  t.digit_perm = invert(digit_perm, 1);
  t.transpose = transpose;
  if (transpose) {
    t.row_perm = invert(col_perm, 0);
    t.col_perm = invert(row_perm, 0);
  } else {
    t.row_perm = invert(row_perm, 0);
    t.col_perm = invert(col_perm, 0);
  }
  return t;
}

int Transformation::map_cell(int c) const {
  int r = shape.row(c), k = shape.col(c);
  if (transpose) std::swap(r, k);
  return shape.cell(row_perm[static_cast<std::size_t>(r)], col_perm[static_cast<std::size_t>(k)]);
}

Grid apply(const Transformation& t, const Grid& g) {
  if (!(t.shape == g.shape())) throw std::invalid_argument("transformation shape differs from grid shape");
  t.validate();
  std::array<std::uint8_t, kMaxCells> out{};
  for (int c = 0; c < g.shape().cell_count(); ++c)
    out[static_cast<std::size_t>(t.map_cell(c))] = t.digit_perm[static_cast<std::size_t>(g.at(c) - 1)];
  return Grid(g.shape(), std::span<const std::uint8_t>(out.data(), static_cast<std::size_t>(g.shape().cell_count())));
}

CellMask apply(const Transformation& t, const CellMask& cells) {
  t.validate();
  CellMask out;
  cells.for_each([&](int c) { out.set(t.map_cell(c)); });
  return out;
}

std::vector<std::vector<std::uint8_t>> line_permutations(const GridShape& shape, bool columns) {
  return columns ? block_permutations(shape.box_cols, shape.stack_count())
                 : block_permutations(shape.box_rows, shape.band_count());
}

std::uint64_t group_size(const GridShape& shape) {
  validate_shape(shape);
  auto fact = [](int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  auto pow = [](std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
  };
  std::uint64_t rows = fact(shape.band_count()) * pow(fact(shape.box_rows), shape.band_count());
  std::uint64_t cols = fact(shape.stack_count()) * pow(fact(shape.box_cols), shape.stack_count());
  return rows * cols * (shape.box_rows == shape.box_cols ? 2 : 1);
}

Grid normalize_digits(const Grid& g) {
  std::array<std::uint8_t, kMaxSide + 1> relabel{};
  std::uint8_t next = 1;
  std::array<std::uint8_t, kMaxCells> out{};
  for (int c = 0; c < g.shape().cell_count(); ++c) {
    auto& r = relabel[static_cast<std::size_t>(g.at(c))];
    if (!r) r = next++;
    out[static_cast<std::size_t>(c)] = r;
  }
  return Grid(g.shape(), std::span<const std::uint8_t>(out.data(), static_cast<std::size_t>(g.shape().cell_count())));
}

namespace {

struct MinlexTables {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::vector<std::uint8_t>> cols;
};

const MinlexTables& tables_for(const GridShape& shape) {
  static const MinlexTables t4{line_permutations(GridShape::s4x4(), false), line_permutations(GridShape::s4x4(), true)};
  static const MinlexTables t6{line_permutations(GridShape::s6x6(), false), line_permutations(GridShape::s6x6(), true)};
  static const MinlexTables t9{line_permutations(GridShape::s9x9(), false), line_permutations(GridShape::s9x9(), true)};
  if (shape == GridShape::s4x4()) return t4;
  if (shape == GridShape::s6x6()) return t6;
  if (shape == GridShape::s9x9()) return t9;
  thread_local MinlexTables other;
  thread_local GridShape other_shape{0, 0};
  if (!(other_shape == shape)) {
    other = {line_permutations(shape, false), line_permutations(shape, true)};
    other_shape = shape;
  }
  return other;
}

}  // namespace

CanonicalForm minlex(const Grid& g) {
  const GridShape& shape = g.shape();
  const int n = shape.side();
  const int cells = shape.cell_count();
  const auto& tab = tables_for(shape);
  // Each generated permutation is read as "target line i takes source line
  // p[i]"; the set is a group, so this covers all of it.
  std::array<std::uint8_t, kMaxCells> best{};
  best.fill(0xff);
  std::array<std::uint8_t, kMaxCells> cand{};
  std::array<std::uint8_t, kMaxCells> src{};
  const int passes = shape.box_rows == shape.box_cols ? 2 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    for (int c = 0; c < cells; ++c)
      src[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(pass ? g.at(shape.col(c), shape.row(c)) : g.at(c));
    for (const auto& rp : tab.rows) {
      for (const auto& cp : tab.cols) {
        std::array<std::uint8_t, kMaxSide + 1> relabel{};
        std::uint8_t next = 1;
        bool less = false;
        bool abort = false;
        int k = 0;
        for (int i = 0; i < n && !abort; ++i) {
          const std::uint8_t* row = &src[static_cast<std::size_t>(rp[static_cast<std::size_t>(i)] * n)];
          for (int j = 0; j < n; ++j, ++k) {
            auto v = row[cp[static_cast<std::size_t>(j)]];
            auto& r = relabel[v];
            if (!r) r = next++;
            cand[static_cast<std::size_t>(k)] = r;
            if (!less) {
              if (r > best[static_cast<std::size_t>(k)]) {
                abort = true;
                break;
              }
              if (r < best[static_cast<std::size_t>(k)]) less = true;
            }
          }
        }
        if (!abort && less) best = cand;
      }
    }
  }
  return {Grid(shape, std::span<const std::uint8_t>(best.data(), static_cast<std::size_t>(cells)))};
}

namespace {

// Row-major backtracking fill with unit masks.
struct Filler {
  GridShape shape;
  int n;
  int cells;
  std::array<std::uint16_t, kMaxSide> rows{}, cols{}, boxes{};
  std::array<std::uint8_t, kMaxCells> val{};
  const std::function<void(const Grid&)>* visit = nullptr;
  std::uint64_t count = 0;

  explicit Filler(GridShape s) : shape(s), n(s.side()), cells(s.cell_count()) {}

  void run(int c) {
    if (c == cells) {
      ++count;
      if (visit && *visit)
        (*visit)(Grid::unchecked(shape, std::span<const std::uint8_t>(val.data(), static_cast<std::size_t>(cells))));
      return;
    }
    const auto r = static_cast<std::size_t>(shape.row(c)), k = static_cast<std::size_t>(shape.col(c)),
               b = static_cast<std::size_t>(shape.box(c));
    if (val[static_cast<std::size_t>(c)]) {  // prefilled
      run(c + 1);
      return;
    }
    std::uint16_t free = static_cast<std::uint16_t>(~(rows[r] | cols[k] | boxes[b]) & ((1u << n) - 1));
    while (free) {
      int d = std::countr_zero(free);
      free = static_cast<std::uint16_t>(free & (free - 1));
      auto bit = static_cast<std::uint16_t>(1u << d);
      rows[r] |= bit; cols[k] |= bit; boxes[b] |= bit;
      val[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(d + 1);
      run(c + 1);
      val[static_cast<std::size_t>(c)] = 0;
      rows[r] &= static_cast<std::uint16_t>(~bit); cols[k] &= static_cast<std::uint16_t>(~bit); boxes[b] &= static_cast<std::uint16_t>(~bit);
    }
  }

  void prefill_first_row() {
    for (int j = 0; j < n; ++j) {
      auto bit = static_cast<std::uint16_t>(1u << j);
      val[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(j + 1);
      rows[0] |= bit;
      cols[static_cast<std::size_t>(j)] |= bit;
      boxes[static_cast<std::size_t>(shape.box(j))] |= bit;
    }
  }
};

}  // namespace

std::uint64_t enumerate_normalized_grids(const GridShape& shape, const std::function<void(const Grid&)>& visit) {
  validate_shape(shape);
  Filler f(shape);
  f.visit = &visit;
  f.prefill_first_row();
  f.run(0);
  return f.count;
}

std::uint64_t count_all_grids(const GridShape& shape) {
  validate_shape(shape);
  Filler f(shape);
  f.run(0);
  return f.count;
}

CatalogSummary catalog(const GridShape& shape, const std::function<void(const Grid&)>& sink) {
  if (!(shape == GridShape::s4x4()) && !(shape == GridShape::s6x6()))
    throw std::invalid_argument("catalogue generation supports only 4x4 and 6x6 shapes");
  // Relabelling acts freely on completions, so every class has a member with
  // first row 1..n and the total is (normalized count) * n!.
  std::set<Grid> reps;
  std::uint64_t normalized = enumerate_normalized_grids(shape, [&](const Grid& g) { reps.insert(minlex(g).grid); });
  std::uint64_t fact = 1;
  for (int i = 2; i <= shape.side(); ++i) fact *= static_cast<std::uint64_t>(i);
  for (const auto& g : reps) sink(g);
  return {normalized * fact, reps.size()};
}

bool verify_scs_bracket(int side, const std::string& total, int claimed_scs) {
  using boost::multiprecision::cpp_int;
  if (side < 2) throw std::invalid_argument("side must be >= 2");
  if (claimed_scs < 2) throw std::invalid_argument("claimed scs must be >= 2");
  std::string digits;
  for (char ch : total) {
    if (ch == ',' || ch == '_') continue;
    if (ch < '0' || ch > '9') throw std::invalid_argument("total must be a decimal integer");
    digits.push_back(ch);
  }
  if (digits.empty()) throw std::invalid_argument("total must be a decimal integer");
  cpp_int t(digits);
  if (t < 1) throw std::invalid_argument("total must be >= 1");
  cpp_int lower = 1;
  for (int i = 0; i < claimed_scs - 1; ++i) lower *= side + 2 * i;
  cpp_int upper = lower * (side + 2 * (claimed_scs - 1));
  return lower < t && t < upper;
}

}  // namespace critset
