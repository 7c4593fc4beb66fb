#pragma once

// Slow, obviously-correct reference implementations. They share nothing with
// the library beyond the Grid/CellMask containers.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "critset/bits.hpp"
#include "critset/grid.hpp"

namespace oracle {

using critset::CellMask;
using critset::Grid;
using critset::GridShape;

inline bool digit_fits(const GridShape& s, const std::vector<int>& d, int c, int v) {
  const int n = s.side();
  const int r = c / n, col = c % n;
  const int br = r / s.box_rows * s.box_rows, bc = col / s.box_cols * s.box_cols;
  for (int i = 0; i < n; ++i) {
    if (i != col && d[static_cast<std::size_t>(r * n + i)] == v) return false;
    if (i != r && d[static_cast<std::size_t>(i * n + col)] == v) return false;
  }
  for (int i = 0; i < s.box_rows; ++i)
    for (int j = 0; j < s.box_cols; ++j) {
      int q = (br + i) * n + bc + j;
      if (q != c && d[static_cast<std::size_t>(q)] == v) return false;
    }
  return true;
}

/// Completions of `digits` (0 = blank), first blank first, stopping at `limit`.
inline int count_completions(const GridShape& s, std::vector<int> digits, int limit) {
  const int cells = s.cell_count();
  for (int c = 0; c < cells; ++c) {
    int v = digits[static_cast<std::size_t>(c)];
    if (v && !digit_fits(s, digits, c, v)) return 0;
  }
  int found = 0;
  std::function<void(int)> rec = [&](int c) {
    while (c < cells && digits[static_cast<std::size_t>(c)]) ++c;
    if (c == cells) {
      ++found;
      return;
    }
    for (int v = 1; v <= s.side() && found < limit; ++v)
      if (digit_fits(s, digits, c, v)) {
        digits[static_cast<std::size_t>(c)] = v;
        rec(c + 1);
        digits[static_cast<std::size_t>(c)] = 0;
      }
  };
  rec(0);
  return found;
}

inline std::vector<int> givens(const Grid& g, const CellMask& clues) {
  std::vector<int> d(static_cast<std::size_t>(g.shape().cell_count()), 0);
  clues.for_each([&](int c) { d[static_cast<std::size_t>(c)] = g.at(c); });
  return d;
}

/// Every completed grid of a shape.
inline std::vector<Grid> all_grids(const GridShape& s) {
  std::vector<Grid> out;
  std::vector<int> d(static_cast<std::size_t>(s.cell_count()), 0);
  std::function<void(int)> rec = [&](int c) {
    if (c == s.cell_count()) {
      std::vector<std::uint8_t> b(d.begin(), d.end());
      out.emplace_back(s, b);
      return;
    }
    for (int v = 1; v <= s.side(); ++v)
      if (digit_fits(s, d, c, v)) {
        d[static_cast<std::size_t>(c)] = v;
        rec(c + 1);
        d[static_cast<std::size_t>(c)] = 0;
      }
  };
  rec(0);
  return out;
}

/// Line permutations (as target -> source lists) that keep bands of `block`
/// lines together, found by filtering all permutations.
inline std::vector<std::vector<int>> block_preserving(int n, int block) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        if (i / block == j / block && p[static_cast<std::size_t>(i)] / block != p[static_cast<std::size_t>(j)] / block)
          ok = false;
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Every cell permutation of the symmetry group, as target -> source maps.
inline std::vector<std::vector<int>> group_cell_maps(const GridShape& s) {
  const int n = s.side();
  auto rows = block_preserving(n, s.box_rows);
  auto cols = block_preserving(n, s.box_cols);
  std::set<std::vector<int>> maps;
  for (int tr = 0; tr < (s.box_rows == s.box_cols ? 2 : 1); ++tr)
    for (const auto& rp : rows)
      for (const auto& cp : cols) {
        std::vector<int> m(static_cast<std::size_t>(n * n));
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) {
            int sr = rp[static_cast<std::size_t>(r)], sc = cp[static_cast<std::size_t>(c)];
            if (tr) std::swap(sr, sc);
            m[static_cast<std::size_t>(r * n + c)] = sr * n + sc;
          }
        maps.insert(m);
      }
  return {maps.begin(), maps.end()};
}

inline std::vector<int> relabel(const std::vector<int>& d) {
  std::array<int, 10> map{};
  int next = 1;
  std::vector<int> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto v = static_cast<std::size_t>(d[i]);
    if (!map[v]) map[v] = next++;
    out[i] = map[v];
  }
  return out;
}

/// Lexicographically smallest digit string over the whole group.
inline std::vector<int> minlex(const Grid& g, const std::vector<std::vector<int>>& maps) {
  std::vector<int> best;
  for (const auto& m : maps) {
    std::vector<int> d(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) d[i] = g.at(m[i]);
    d = relabel(d);
    if (best.empty() || d < best) best = d;
  }
  return best;
}

/// Minimal unavoidable sets of size <= max_size: the minimal cell sets on
/// which `g` differs from some other completed grid.
inline std::vector<CellMask> minimal_unavoidable(const Grid& g, const std::vector<Grid>& all, int max_size) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> diffs;
  for (const auto& h : all) {
    if (h == g) continue;
    CellMask m;
    for (int c = 0; c < g.shape().cell_count(); ++c)
      if (g.at(c) != h.at(c)) m.set(c);
    diffs.insert({m.lo, m.hi});
  }
  std::vector<CellMask> all_diffs;
  for (auto [lo, hi] : diffs) all_diffs.push_back({lo, hi});
  std::vector<CellMask> out;
  for (const auto& m : all_diffs) {
    if (m.count() > max_size) continue;
    bool minimal = std::none_of(all_diffs.begin(), all_diffs.end(),
                                [&](const CellMask& o) { return !(o == m) && o.subset_of(m); });
    if (minimal) out.push_back(m);
  }
  return out;
}

/// All k-subsets of 0..n-1 meeting every set.
inline std::set<std::pair<std::uint64_t, std::uint64_t>> hitting_sets(int n, int k, const std::vector<CellMask>& sets) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  CellMask cur;
  std::function<void(int, int)> rec = [&](int from, int left) {
    if (left == 0) {
      for (const auto& s : sets)
        if (!s.intersects(cur)) return;
      out.insert({cur.lo, cur.hi});
      return;
    }
    for (int c = from; c <= n - left; ++c) {
      cur.set(c);
      rec(c + 1, left - 1);
      cur.reset(c);
    }
  };
  rec(0, k);
  return out;
}

/// Every k-clue subset of `g` with a unique completion.
inline std::set<std::pair<std::uint64_t, std::uint64_t>> proper_puzzles(const Grid& g, int k) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (auto [lo, hi] : hitting_sets(g.shape().cell_count(), k, {})) {
    CellMask m{lo, hi};
    if (count_completions(g.shape(), givens(g, m), 2) == 1) out.insert({lo, hi});
  }
  return out;
}

inline std::set<std::pair<std::uint64_t, std::uint64_t>> as_set(const std::vector<CellMask>& v) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& m : v) out.insert({m.lo, m.hi});
  return out;
}

}  // namespace oracle
