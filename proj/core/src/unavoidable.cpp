#include "critset/unavoidable.hpp"

#include <algorithm>
#include <bit>

#include "critset/solver.hpp"
#include "critset/symmetry.hpp"

namespace critset {

void UnavoidableFamily::truncate(std::size_t n) {
  if (sets.size() > n) sets.resize(n);
}

bool family_order_less(const CellMask& a, const CellMask& b) {
  int ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  return index_order_less(a, b);
}

bool is_unavoidable(const Grid& g, const CellMask& x) {
  CellMask rest = ~x & CellMask::low_bits(g.shape().cell_count());
  return count_completions(Givens::from_clues(g, rest), 2).count == 2;
}

bool is_unavoidable(const Grid& g, const CellSet& x) { return is_unavoidable(g, x.mask()); }

bool is_minimal(const Grid& g, const CellMask& u) {
  bool minimal = true;
  u.for_each([&](int c) {
    if (!minimal) return;
    CellMask smaller = u;
    smaller.reset(c);
    if (is_unavoidable(g, smaller)) minimal = false;
  });
  return minimal;
}

namespace {

// Refills the cells holding a digit subset, row by row, with a bound on the
// number of changed cells.
class TradeSearch {
 public:
  TradeSearch(const Grid& g, int max_size) : g_(g), shape_(g.shape()), n_(shape_.side()), max_size_(max_size) {}

  void run(std::uint16_t digits, std::vector<CellMask>& out) {
    digits_ = digits;
    out_ = &out;
    s_ = std::popcount(digits);
    for (int r = 0; r < n_; ++r) {
      int t = 0;
      for (int k = 0; k < n_; ++k) {
        int c = shape_.cell(r, k);
        int d = g_.at(c) - 1;
        if (digits >> d & 1u) {
          pos_[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(c);
          orig_[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(d);
          ++t;
        }
      }
    }
    col_used_.fill(0);
    box_used_.fill(0);
    col_new_.fill(0);
    col_old_.fill(0);
    box_new_.fill(0);
    box_old_.fill(0);
    moved_ = 0;
    diff_ = 0;
    changed_ = {};
    fill(0, 0, 0);
  }

 private:
  int lower_bound() const {
    int cols = 0, boxes = 0;
    for (int i = 0; i < n_; ++i) {
      cols += std::popcount(static_cast<unsigned>(col_new_[static_cast<std::size_t>(i)] & ~col_old_[static_cast<std::size_t>(i)]));
      boxes += std::popcount(static_cast<unsigned>(box_new_[static_cast<std::size_t>(i)] & ~box_old_[static_cast<std::size_t>(i)]));
    }
    int unmoved = std::popcount(static_cast<unsigned>(digits_ & ~moved_));
    return std::max({cols, boxes, unmoved});
  }

  void fill(int row, int slot, std::uint16_t row_used) {
    if (slot == s_) {
      if (row + 1 == n_) {
        if (diff_ > 0 && moved_ == digits_) out_->push_back(changed_);
        return;
      }
      fill(row + 1, 0, 0);
      return;
    }
    const auto r = static_cast<std::size_t>(row), t = static_cast<std::size_t>(slot);
    const int c = pos_[r][t];
    const int orig = orig_[r][t];
    const auto col = static_cast<std::size_t>(shape_.col(c));
    const auto box = static_cast<std::size_t>(shape_.box(c));
    std::uint16_t avail = static_cast<std::uint16_t>(digits_ & ~row_used & ~col_used_[col] & ~box_used_[box]);
    // Keeping the original digit first.
    if (avail >> orig & 1u) {
      auto bit = static_cast<std::uint16_t>(1u << orig);
      col_used_[col] |= bit;
      box_used_[box] |= bit;
      fill(row, slot + 1, static_cast<std::uint16_t>(row_used | bit));
      col_used_[col] &= static_cast<std::uint16_t>(~bit);
      box_used_[box] &= static_cast<std::uint16_t>(~bit);
      avail = static_cast<std::uint16_t>(avail & ~bit);
    }
    if (diff_ + 1 > max_size_) return;
    const auto obit = static_cast<std::uint16_t>(1u << orig);
    while (avail) {
      int v = std::countr_zero(avail);
      avail = static_cast<std::uint16_t>(avail & (avail - 1));
      auto bit = static_cast<std::uint16_t>(1u << v);
      // Save the per-unit trade masks; they are sets, so restore by value.
      auto saved_cn = col_new_[col], saved_co = col_old_[col], saved_bn = box_new_[box], saved_bo = box_old_[box];
      auto saved_moved = moved_;
      col_used_[col] |= bit;
      box_used_[box] |= bit;
      col_new_[col] |= bit;
      col_old_[col] |= obit;
      box_new_[box] |= bit;
      box_old_[box] |= obit;
      moved_ |= obit;
      ++diff_;
      changed_.set(c);
      if (diff_ + lower_bound() <= max_size_) fill(row, slot + 1, static_cast<std::uint16_t>(row_used | bit));
      changed_.reset(c);
      --diff_;
      moved_ = saved_moved;
      col_new_[col] = saved_cn;
      col_old_[col] = saved_co;
      box_new_[box] = saved_bn;
      box_old_[box] = saved_bo;
      col_used_[col] &= static_cast<std::uint16_t>(~bit);
      box_used_[box] &= static_cast<std::uint16_t>(~bit);
    }
  }

  const Grid& g_;
  GridShape shape_;
  int n_;
  int max_size_;
  std::uint16_t digits_ = 0;
  int s_ = 0;
  std::vector<CellMask>* out_ = nullptr;
  std::array<std::array<std::uint8_t, kMaxSide>, kMaxSide> pos_{};
  std::array<std::array<std::uint8_t, kMaxSide>, kMaxSide> orig_{};
  std::array<std::uint16_t, kMaxSide> col_used_{}, box_used_{};
  std::array<std::uint16_t, kMaxSide> col_new_{}, col_old_{}, box_new_{}, box_old_{};
  std::uint16_t moved_ = 0;
  int diff_ = 0;
  CellMask changed_;
};

}  // namespace

UnavoidableFamily find_minimal_unavoidable(const Grid& g, int max_size) {
  if (max_size < 4) throw std::invalid_argument("max_size must be >= 4");
  const int n = g.shape().side();
  // Every digit of a minimal set occurs at least twice in it.
  const int max_digits = std::min(n, max_size / 2);
  std::vector<CellMask> candidates;
  TradeSearch search(g, max_size);
  for (unsigned digits = 0; digits < (1u << n); ++digits) {
    int s = std::popcount(digits);
    if (s < 2 || s > max_digits) continue;
    search.run(static_cast<std::uint16_t>(digits), candidates);
  }
  std::sort(candidates.begin(), candidates.end(), family_order_less);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  UnavoidableFamily fam;
  fam.shape = g.shape();
  fam.degree = 1;
  for (const auto& cand : candidates) {
    bool has_subset = false;
    for (const auto& kept : fam.sets) {
      if (kept.count() >= cand.count()) break;
      if (kept.subset_of(cand)) {
        has_subset = true;
        break;
      }
    }
    if (!has_subset) fam.sets.push_back(cand);
  }
  return fam;
}

bool verify_degree(const Grid& g, const CellMask& u, int degree, std::uint64_t budget) {
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  const auto cells = u.indices();
  const int m = static_cast<int>(cells.size());
  const int remove = degree - 1;
  if (m < degree) throw std::invalid_argument("set smaller than degree");
  // C(m, remove) with early exit past the budget.
  std::uint64_t combos = 1;
  for (int i = 0; i < remove; ++i) {
    combos = combos * static_cast<std::uint64_t>(m - i) / static_cast<std::uint64_t>(i + 1);
    if (combos > budget) throw DegreeBudgetExceeded("too many removal combinations for degree check");
  }
  std::vector<int> idx(static_cast<std::size_t>(remove));
  for (int i = 0; i < remove; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    CellMask rest = u;
    for (int i : idx) rest.reset(cells[static_cast<std::size_t>(i)]);
    if (!is_unavoidable(g, rest)) return false;
    int i = remove - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - remove + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < remove; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

namespace {

struct CliqueBuilder {
  const std::vector<CellMask>& sets;
  int d;
  std::size_t start;
  std::size_t cap;
  std::vector<CellMask>& out;

  // Level t picks an index in [start - t, upper), disjoint from `acc`.
  bool scan(int t, std::size_t upper, const CellMask& acc) {
    const std::size_t lo = start - static_cast<std::size_t>(t);
    for (std::size_t i = lo; i < upper; ++i) {
      if (sets[i].intersects(acc)) continue;
      CellMask next = acc | sets[i];
      if (t + 1 == d) {
        out.push_back(next);
        if (out.size() >= cap) return false;
      } else if (!scan(t + 1, i, next)) {
        return false;
      }
    }
    return true;
  }
};

}  // namespace

UnavoidableFamily build_cliques(const UnavoidableFamily& family, int d, std::size_t start, std::size_t cap) {
  if (d < 2) throw std::invalid_argument("clique size must be >= 2");
  if (start < static_cast<std::size_t>(d - 1)) throw std::invalid_argument("start must be >= d - 1");
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  UnavoidableFamily out;
  out.shape = family.shape;
  out.degree = d * family.degree;
  out.cap = cap;
  CliqueBuilder b{family.sets, d, start, cap, out.sets};
  b.scan(0, family.sets.size(), CellMask{});
  return out;
}

bool digit_twice_in_band(const Grid& g, const CellMask& u) {
  const GridShape& s = g.shape();
  std::array<std::uint16_t, kMaxSide> seen{};
  bool twice = false;
  u.for_each([&](int c) {
    auto band = static_cast<std::size_t>(s.row(c) / s.box_rows);
    auto bit = static_cast<std::uint16_t>(1u << (g.at(c) - 1));
    if (seen[band] & bit) twice = true;
    seen[band] |= bit;
  });
  return twice;
}

bool blueprint_property_holds(const Grid& g, const CellMask& u) {
  if (digit_twice_in_band(g, u)) return true;
  if (g.shape().box_rows != g.shape().box_cols) return false;
  Transformation t = Transformation::identity(g.shape());
  t.transpose = true;
  return digit_twice_in_band(apply(t, g), apply(t, u));
}

bool digits_occur_twice(const Grid& g, const CellMask& u) {
  std::array<int, kMaxSide + 1> count{};
  u.for_each([&](int c) { ++count[static_cast<std::size_t>(g.at(c))]; });
  return std::none_of(count.begin(), count.end(), [](int k) { return k == 1; });
}

bool unit_intersections_ok(const GridShape& shape, const CellMask& u) {
  std::array<int, kMaxSide> rows{}, cols{}, boxes{};
  u.for_each([&](int c) {
    ++rows[static_cast<std::size_t>(shape.row(c))];
    ++cols[static_cast<std::size_t>(shape.col(c))];
    ++boxes[static_cast<std::size_t>(shape.box(c))];
  });
  for (int i = 0; i < shape.side(); ++i)
    if (rows[static_cast<std::size_t>(i)] == 1 || cols[static_cast<std::size_t>(i)] == 1 ||
        boxes[static_cast<std::size_t>(i)] == 1)
      return false;
  return true;
}

}  // namespace critset
