#include "critset/solver.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>

namespace critset {

struct Solver::State {
  std::array<std::uint16_t, kMaxCells> cand{};  // 0 once the cell is filled
  std::array<std::uint8_t, kMaxCells> val{};
  int empty = 0;
};

// Recursive search with a bounded result count. Not thread-shared.
struct Solver::Search {
  const Solver& s;
  int limit;
  int found = 0;
  std::vector<Grid> completions;
  std::mt19937_64* rng = nullptr;

  Search(const Solver& solver, int max_found) : s(solver), limit(max_found) {}

  bool place(State& st, int c, int d) {
    auto bit = static_cast<std::uint16_t>(1u << (d - 1));
    st.val[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(d);
    st.cand[static_cast<std::size_t>(c)] = 0;
    --st.empty;
    const std::uint8_t* p = &s.peers_[static_cast<std::size_t>(c * s.peer_count_)];
    for (int i = 0; i < s.peer_count_; ++i) {
      auto q = p[i];
      if (st.val[q] == d) return false;
      if (st.val[q] == 0 && (st.cand[q] & bit)) {
        st.cand[q] = static_cast<std::uint16_t>(st.cand[q] & ~bit);
        if (st.cand[q] == 0) return false;
      }
    }
    return true;
  }

  // Naked and hidden singles to a fixed point. False on contradiction.
  bool propagate(State& st) {
    for (;;) {
      bool changed = false;
      for (int c = 0; c < s.cells_; ++c) {
        auto m = st.cand[static_cast<std::size_t>(c)];
        if (m && (m & (m - 1)) == 0) {
          if (!place(st, c, std::countr_zero(m) + 1)) return false;
          changed = true;
        }
      }
      const int units = 3 * s.n_;
      for (int u = 0; u < units; ++u) {
        const std::uint8_t* cells = &s.units_[static_cast<std::size_t>(u * s.n_)];
        std::uint16_t once = 0, twice = 0, placed = 0;
        for (int i = 0; i < s.n_; ++i) {
          auto c = cells[i];
          if (st.val[c]) {
            placed = static_cast<std::uint16_t>(placed | (1u << (st.val[c] - 1)));
          } else {
            twice = static_cast<std::uint16_t>(twice | (once & st.cand[c]));
            once = static_cast<std::uint16_t>(once | st.cand[c]);
          }
        }
        if (static_cast<std::uint16_t>(once | placed) != s.full_) return false;
        std::uint16_t hidden = static_cast<std::uint16_t>(once & ~twice & ~placed);
        while (hidden) {
          int d = std::countr_zero(hidden);
          hidden = static_cast<std::uint16_t>(hidden & (hidden - 1));
          for (int i = 0; i < s.n_; ++i) {
            auto c = cells[i];
            if (st.val[c] == 0 && (st.cand[c] >> d & 1u)) {
              if (!place(st, c, d + 1)) return false;
              changed = true;
              break;
            }
          }
        }
      }
      if (!changed) return true;
    }
  }

  void run(State st) {
    if (!propagate(st)) return;
    if (st.empty == 0) {
      ++found;
      if (completions.size() < 2)
        completions.push_back(Grid::unchecked(s.shape_, std::span<const std::uint8_t>(st.val.data(), static_cast<std::size_t>(s.cells_))));
      return;
    }
    int best = -1, best_count = 99;
    for (int c = 0; c < s.cells_; ++c) {
      auto m = st.cand[static_cast<std::size_t>(c)];
      if (m == 0) continue;
      int k = std::popcount(m);
      if (k < best_count) {
        best = c;
        best_count = k;
        if (k == 2) break;
      }
    }
    std::array<int, kMaxSide> order{};
    int count = 0;
    for (auto m = st.cand[static_cast<std::size_t>(best)]; m; m = static_cast<std::uint16_t>(m & (m - 1)))
      order[static_cast<std::size_t>(count++)] = std::countr_zero(m) + 1;
    if (rng) std::shuffle(order.begin(), order.begin() + count, *rng);
    for (int i = 0; i < count && found < limit; ++i) {
      State next = st;
      if (place(next, best, order[static_cast<std::size_t>(i)])) run(next);
    }
  }
};

Solver::Solver(GridShape shape) : shape_(shape) {
  validate_shape(shape);
  n_ = shape.side();
  cells_ = shape.cell_count();
  full_ = static_cast<std::uint16_t>((1u << n_) - 1);
  units_.resize(static_cast<std::size_t>(3 * n_ * n_));
  cell_units_.resize(static_cast<std::size_t>(3 * cells_));
  std::vector<int> fill(static_cast<std::size_t>(3 * n_), 0);
  for (int c = 0; c < cells_; ++c) {
    int ids[3] = {shape.row(c), n_ + shape.col(c), 2 * n_ + shape.box(c)};
    for (int k = 0; k < 3; ++k) {
      auto u = static_cast<std::size_t>(ids[k]);
      units_[u * static_cast<std::size_t>(n_) + static_cast<std::size_t>(fill[u]++)] = static_cast<std::uint8_t>(c);
      cell_units_[static_cast<std::size_t>(3 * c + k)] = static_cast<std::uint8_t>(ids[k]);
    }
  }
  // Peers: row + col + box minus self, deduplicated.
  peer_count_ = 3 * (n_ - 1) - (shape.box_rows - 1) - (shape.box_cols - 1);
  peers_.reserve(static_cast<std::size_t>(cells_ * peer_count_));
  for (int c = 0; c < cells_; ++c) {
    int added = 0;
    for (int q = 0; q < cells_; ++q) {
      if (q == c) continue;
      if (shape.row(q) == shape.row(c) || shape.col(q) == shape.col(c) || shape.box(q) == shape.box(c)) {
        peers_.push_back(static_cast<std::uint8_t>(q));
        ++added;
      }
    }
    if (added != peer_count_) throw std::logic_error("peer count mismatch");
  }
}

SolveOutcome Solver::count_completions(const Givens& givens, int limit) const {
  if (limit < 1) throw std::invalid_argument("limit must be >= 1");
  if (!(givens.shape == shape_)) throw std::invalid_argument("givens shape differs from solver shape");
  State st;
  st.empty = cells_;
  for (int c = 0; c < cells_; ++c) st.cand[static_cast<std::size_t>(c)] = full_;
  // Clashing givens are malformed input, distinct from "no completion".
  std::array<std::uint16_t, 3 * kMaxSide> used{};
  for (int c = 0; c < cells_; ++c) {
    int d = givens.digits[static_cast<std::size_t>(c)];
    if (d == 0) continue;
    if (d > n_) throw InconsistentGivens("digit out of range at cell " + std::to_string(c));
    auto bit = static_cast<std::uint16_t>(1u << (d - 1));
    for (int k = 0; k < 3; ++k) {
      auto u = cell_units_[static_cast<std::size_t>(3 * c + k)];
      if (used[u] & bit)
        throw InconsistentGivens("digit " + std::to_string(d) + " repeated in a unit (cell " + std::to_string(c) + ")");
      used[u] = static_cast<std::uint16_t>(used[u] | bit);
    }
  }
  Search search(*this, limit);
  bool ok = true;
  for (int c = 0; c < cells_ && ok; ++c) {
    int d = givens.digits[static_cast<std::size_t>(c)];
    if (d) ok = search.place(st, c, d);
  }
  if (ok) search.run(st);
  SolveOutcome out;
  out.count = std::min(search.found, limit);
  out.completions = std::move(search.completions);
  return out;
}

std::optional<Grid> Solver::random_completion(const Givens& givens, std::mt19937_64& rng) const {
  State st;
  st.empty = cells_;
  for (int c = 0; c < cells_; ++c) st.cand[static_cast<std::size_t>(c)] = full_;
  Search search(*this, 1);
  search.rng = &rng;
  for (int c = 0; c < cells_; ++c) {
    int d = givens.digits[static_cast<std::size_t>(c)];
    if (d && !search.place(st, c, d)) return std::nullopt;
  }
  search.run(st);
  if (search.completions.empty()) return std::nullopt;
  return search.completions.front();
}

const Solver& solver_for(const GridShape& shape) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Solver>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{shape.box_rows, shape.box_cols}];
  if (!slot) slot = std::make_unique<Solver>(shape);
  return *slot;
}

SolveOutcome count_completions(const Givens& givens, int limit) {
  return solver_for(givens.shape).count_completions(givens, limit);
}

bool is_proper(const Puzzle& p) {
  auto out = count_completions(p.givens(), 2);
  return out.count == 1 && out.completions.front() == p.grid();
}

bool verify_two_completions(const Givens& givens, const SolveOutcome& outcome) {
  if (outcome.completions.size() < 2) return false;
  const Grid& a = outcome.completions[0];
  const Grid& b = outcome.completions[1];
  for (const Grid* g : {&a, &b}) {
    if (!(g->shape() == givens.shape)) return false;
    if (!is_valid_grid(g->shape(), g->digits())) return false;
    for (int c = 0; c < givens.shape.cell_count(); ++c) {
      int d = givens.digits[static_cast<std::size_t>(c)];
      if (d && g->at(c) != d) return false;
    }
  }
  return !(a == b);
}

Grid random_grid(const GridShape& shape, std::mt19937_64& rng) {
  Givens empty;
  empty.shape = shape;
  auto g = solver_for(shape).random_completion(empty, rng);
  if (!g) throw std::logic_error("empty grid has no completion");
  return *g;
}

}  // namespace critset
