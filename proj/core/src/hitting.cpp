#include "critset/hitting.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <climits>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace critset {

void HittingInstance::validate() const {
  if (universe_size < 1 || universe_size > CellMask::kCapacity)
    throw std::invalid_argument("universe size must be in 1..128");
  if (k < 1 || k > universe_size) throw std::invalid_argument("k must be in 1..universe size");
  const CellMask universe = CellMask::low_bits(universe_size);
  for (const auto& [d, sets] : families) {
    if (d < 1) throw std::invalid_argument("family degree must be >= 1");
    for (const auto& s : sets)
      if (!s.subset_of(universe)) throw std::invalid_argument("family member outside the universe");
  }
}

const std::vector<CellMask>& HittingInstance::degree_one() const {
  static const std::vector<CellMask> empty;
  auto it = families.find(1);
  return it == families.end() ? empty : it->second;
}

HitTable::HitTable(int universe_, std::size_t bits_)
    : universe(universe_), bits(bits_), words((bits_ + 63) / 64),
      data(static_cast<std::size_t>(universe_) * ((bits_ + 63) / 64), 0) {}

HitTable make_hit_table(int universe, std::span<const CellMask> sets) {
  HitTable t(universe, sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    sets[i].for_each([&](int c) {
      if (c < universe) t.row(c)[i >> 6] |= std::uint64_t{1} << (i & 63);
    });
  return t;
}

std::map<int, HitTable> init_hitting_vectors(const HittingInstance& instance) {
  std::map<int, HitTable> out;
  for (const auto& [d, sets] : instance.families) out.emplace(d, make_hit_table(instance.universe_size, sets));
  return out;
}

std::uint8_t con8_reference(std::uint8_t mask, std::uint8_t bits) {
  std::uint8_t out = 0;
  int k = 0;
  for (int i = 0; i < 8; ++i)
    if (!((mask >> i) & 1u)) {
      if ((bits >> i) & 1u) out = static_cast<std::uint8_t>(out | (1u << k));
      ++k;
    }
  return out;
}

namespace {

struct Con8Table {
  std::array<std::uint8_t, 65536> t{};
  Con8Table() {
    for (unsigned m = 0; m < 256; ++m)
      for (unsigned b = 0; b < 256; ++b)
        t[m << 8 | b] = con8_reference(static_cast<std::uint8_t>(m), static_cast<std::uint8_t>(b));
  }
};

const Con8Table& con8_table() {
  static const Con8Table table;
  return table;
}

// Appends the unhit slots of every listed row of `src` into `dst` (rows are
// zeroed first). Returns the number kept; `map` receives original slots.
std::size_t gather(std::span<const std::uint64_t> state, const HitTable& src, HitTable& dst, const CellMask& rows,
                   std::size_t cap, std::vector<std::uint32_t>* map) {
  const auto& tab = con8_table().t;
  rows.for_each([&](int c) {
    auto r = dst.row(c);
    std::fill(r.begin(), r.end(), 0);
  });
  std::size_t cnt = 0;
  const std::size_t bytes = (src.bits + 7) / 8;
  for (std::size_t b = 0; b < bytes && cnt < cap; ++b) {
    const std::size_t w = b >> 3, shift = (b & 7) * 8;
    auto sbyte = static_cast<std::uint8_t>(state[w] >> shift);
    // Slots past the end count as hit.
    const std::size_t first_slot = b * 8;
    if (first_slot + 8 > src.bits) sbyte = static_cast<std::uint8_t>(sbyte | (0xffu << (src.bits - first_slot)));
    const int keep = 8 - std::popcount(static_cast<unsigned>(sbyte));
    if (keep == 0) continue;
    const std::size_t dw = cnt >> 6, doff = cnt & 63;
    const std::uint8_t* tline = &tab[static_cast<std::size_t>(sbyte) << 8];
    rows.for_each([&](int c) {
      const std::uint64_t v = tline[static_cast<std::uint8_t>(src.row(c)[w] >> shift)];
      if (!v) return;
      auto r = dst.row(c);
      r[dw] |= v << doff;
      if (doff > 56 && dw + 1 < dst.words) r[dw + 1] |= v >> (64 - doff);
    });
    if (map)
      for (int i = 0; i < 8; ++i)
        if (!((sbyte >> i) & 1u)) map->push_back(static_cast<std::uint32_t>(first_slot + static_cast<std::size_t>(i)));
    cnt += static_cast<std::size_t>(keep);
  }
  cnt = std::min(cnt, cap);
  if (map && map->size() > cnt) map->resize(cnt);
  // Clear slots gathered past the cap.
  const std::size_t fw = cnt >> 6, rem = cnt & 63;
  rows.for_each([&](int c) {
    auto r = dst.row(c);
    std::size_t start = fw;
    if (rem) {
      r[fw] &= (std::uint64_t{1} << rem) - 1;
      start = fw + 1;
    }
    for (std::size_t i = start; i < r.size(); ++i) r[i] = 0;
  });
  return cnt;
}

std::size_t count_unhit(std::span<const std::uint64_t> state, std::size_t bits) {
  std::size_t hit = 0;
  const std::size_t full = bits / 64, rem = bits % 64;
  for (std::size_t i = 0; i < full; ++i) hit += static_cast<std::size_t>(std::popcount(state[i]));
  if (rem) hit += static_cast<std::size_t>(std::popcount(state[full] & ((std::uint64_t{1} << rem) - 1)));
  return bits - hit;
}

}  // namespace

std::uint8_t con8(std::uint8_t mask, std::uint8_t bits) {
  return con8_table().t[static_cast<std::size_t>(mask) << 8 | bits];
}

Consolidated consolidate(std::span<const std::uint64_t> state, const HitTable& table, std::size_t cap) {
  if (state.size() < table.words) throw std::invalid_argument("state row shorter than table row");
  Consolidated out;
  out.unhit = count_unhit(state, table.bits);
  const std::size_t kept = std::min(cap, out.unhit);
  // One spare word absorbs the spill of the last gathered byte.
  HitTable dst(table.universe, kept + 64);
  out.table = std::move(dst);
  out.index_map.reserve(kept);
  std::size_t n = gather(state, table, out.table, CellMask::low_bits(table.universe), cap, &out.index_map);
  out.table.bits = n;
  return out;
}

int effective_size(const CellMask& set, const CellMask& dead) { return (set & ~dead).count(); }

SelectionSchedule SelectionSchedule::for_k(int k) {
  const int shift = k - 16;
  SelectionSchedule s;
  s.full_scan_until = 10 + shift;
  s.window_level = 10 + shift;
  s.unhit_level = 11 + shift;
  return s;
}

SelectionSchedule SelectionSchedule::first_unhit() {
  SelectionSchedule s;
  s.full_scan_until = 0;
  s.window_level = -1;
  s.unhit_level = -1;
  return s;
}

namespace {

template <typename F>
bool for_each_unhit(std::span<const std::uint64_t> state, std::size_t bits, F&& f) {
  const std::size_t words = (bits + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t z = ~state[w];
    if (w + 1 == words && bits % 64) z &= (std::uint64_t{1} << (bits % 64)) - 1;
    for (; z; z &= z - 1)
      if (!f(w * 64 + static_cast<std::size_t>(std::countr_zero(z)))) return false;
  }
  return true;
}

}  // namespace

Selection select_set(int level, std::span<const CellMask> sets, std::span<const std::uint64_t> state,
                     const CellMask& dead, const SelectionSchedule& schedule, bool use_effective_size) {
  const std::size_t bits = sets.size();
  Selection sel;
  std::size_t first = SIZE_MAX;
  for_each_unhit(state, bits, [&](std::size_t i) {
    first = i;
    return false;
  });
  if (first == SIZE_MAX) return sel;  // all hit

  auto chosen = [&](std::size_t i, int eff) {
    Selection s;
    s.index = i;
    s.effective = eff;
    s.kind = eff == 0 ? Selection::Kind::kCut : Selection::Kind::kChosen;
    return s;
  };
  if (!use_effective_size) return chosen(first, effective_size(sets[first], dead));

  std::size_t limit_index = SIZE_MAX;  // scan only indices below this
  std::size_t limit_count = SIZE_MAX;  // scan at most this many unhit sets
  if (level < schedule.full_scan_until) {
  } else if (level == schedule.window_level) {
    limit_index = schedule.window;
  } else if (level == schedule.unhit_level) {
    limit_count = schedule.unhit_count;
  } else {
    return chosen(first, effective_size(sets[first], dead));
  }
  if (first >= limit_index) return chosen(first, effective_size(sets[first], dead));

  std::size_t best = first;
  int best_eff = INT_MAX;
  std::size_t seen = 0;
  for_each_unhit(state, bits, [&](std::size_t i) {
    if (i >= limit_index || seen >= limit_count) return false;
    ++seen;
    int eff = effective_size(sets[i], dead);
    if (eff < best_eff) {
      best_eff = eff;
      best = i;
      if (eff == 0) return false;
    }
    return true;
  });
  return chosen(best, best_eff);
}

EngineConfig EngineConfig::defaults_for(int k) {
  EngineConfig c;
  c.selection = SelectionSchedule::for_k(k);
  // Trigger levels and caps tuned for k = 16; triggers scale with k.
  const std::array<std::tuple<int, int, std::size_t>, 6> table{{
      {1, 7, 128}, {2, 7, 1024}, {3, 6, 1536}, {4, 5, 1536}, {5, 5, 1536}, {6, 5, 1536}}};
  for (auto [d, level, cap] : table) {
    int t = static_cast<int>(std::lround(level * k / 16.0));
    t = std::clamp(t, 1, std::max(1, k - 1));
    if (t < k) c.consolidation[d] = {t, cap};
  }
  return c;
}

EngineConfig EngineConfig::baseline() {
  EngineConfig c;
  c.enable_degree_pruning = false;
  c.enable_consolidation = false;
  c.enable_effective_size = false;
  c.selection = SelectionSchedule::first_unhit();
  return c;
}

void EngineConfig::validate(int k) const {
  for (const auto& [d, step] : consolidation) {
    if (step.cap < 1) throw std::invalid_argument("consolidation cap must be >= 1");
    if (step.trigger_level < 0 || step.trigger_level >= k)
      throw std::invalid_argument("consolidation trigger level must be in 0..k-1");
  }
  if (selection.window < 1 || selection.unhit_count < 1)
    throw std::invalid_argument("selection scan sizes must be >= 1");
}

int EngineConfig::check_level(int degree, int k) const {
  auto it = pruning_levels.find(degree);
  if (it != pruning_levels.end()) return it->second;
  return std::max(0, k - degree + 1);
}

namespace {

class Engine {
 public:
  Engine(const HittingInstance& inst, const EngineConfig& cfg, const HittingSink& sink)
      : inst_(inst), cfg_(cfg), sink_(sink), k_(inst.k), universe_(CellMask::low_bits(inst.universe_size)) {
    const auto& d1 = inst.degree_one();
    tracks_.push_back(make_track(1, d1, k_));
    if (cfg.enable_degree_pruning)
      for (const auto& [d, sets] : inst.families)
        if (d >= 2 && !sets.empty()) tracks_.push_back(make_track(d, sets, cfg.check_level(d, k_)));
    for (auto& t : tracks_) t.active[0] = &t.original;
    sets1_.assign(static_cast<std::size_t>(k_ + 1), nullptr);
    sets1_size_.assign(static_cast<std::size_t>(k_ + 1), 0);
    truncated_.assign(static_cast<std::size_t>(k_ + 1), false);
    dead_.assign(static_cast<std::size_t>(k_ + 1), CellMask{});
    chosen_.assign(static_cast<std::size_t>(k_ + 1), CellMask{});
    sets1_[0] = d1.data();
    sets1_size_[0] = d1.size();
  }

  EngineStats run() {
    node(0);
    return stats_;
  }

 private:
  struct Track {
    int degree = 1;
    int last_level = 0;  // deepest level whose state is consulted
    std::optional<ConsolidationStep> step;
    HitTable original;
    HitTable cons;
    std::vector<std::uint32_t> cons_map;
    std::vector<std::vector<std::uint64_t>> state;  // per level
    std::vector<const HitTable*> active;           // per level
  };

  Track make_track(int degree, const std::vector<CellMask>& sets, int last_level) {
    Track t;
    t.degree = degree;
    t.last_level = last_level;
    t.original = make_hit_table(inst_.universe_size, sets);
    if (cfg_.enable_consolidation) {
      auto it = cfg_.consolidation.find(degree);
      if (it != cfg_.consolidation.end() && it->second.trigger_level < last_level) {
        t.step = it->second;
        const std::size_t kept = std::min(it->second.cap, sets.size());
        t.cons = HitTable(inst_.universe_size, kept + 64);
      }
    }
    t.state.assign(static_cast<std::size_t>(k_ + 1), std::vector<std::uint64_t>(t.original.words + 1, 0));
    t.active.assign(static_cast<std::size_t>(k_ + 1), nullptr);
    return t;
  }

  void node(int j) {
    ++stats_.nodes;
    const auto ju = static_cast<std::size_t>(j);
    for (std::size_t t = 1; t < tracks_.size(); ++t) {
      auto& tr = tracks_[t];
      if (tr.last_level == j && !BitRow::all_ones(tr.state[ju], tr.active[ju]->bits)) {
        ++stats_.pruned_by_degree;
        return;
      }
    }
    Track& t1 = tracks_[0];
    if (BitRow::all_ones(t1.state[ju], t1.active[ju]->bits)) {
      free_fill(j);
      return;
    }
    if (j == k_) return;

    if (cfg_.enable_consolidation) consolidate_at(j);

    const CellMask& dead = dead_[ju];
    Selection sel = select_set(j, {sets1_[ju], sets1_size_[ju]}, t1.state[ju], cfg_.enable_dedup ? dead : CellMask{},
                               cfg_.selection, cfg_.enable_effective_size);
    if (sel.kind == Selection::Kind::kCut) {
      ++stats_.cut_dead;
      return;
    }
    const CellMask set = sets1_[ju][sel.index];
    const auto next = ju + 1;
    set.for_each([&](int c) {
      if (cfg_.enable_dedup && dead.test(c)) return;
      chosen_[next] = chosen_[ju];
      chosen_[next].set(c);
      for (auto& tr : tracks_) {
        if (static_cast<int>(next) > tr.last_level) continue;
        const HitTable* a = tr.active[ju];
        tr.active[next] = a;
        const auto row = a->row(c);
        const auto& src = tr.state[ju];
        auto& dst = tr.state[next];
        for (std::size_t w = 0; w < a->words; ++w) dst[w] = src[w] | row[w];
      }
      sets1_[next] = sets1_[ju];
      sets1_size_[next] = sets1_size_[ju];
      truncated_[next] = truncated_[ju];
      dead_[next] = cfg_.enable_dedup ? (dead | (set & CellMask::low_bits(c + 1))) : dead;
      node(j + 1);
    });
  }

  void consolidate_at(int j) {
    const auto ju = static_cast<std::size_t>(j);
    // Dead cells are never drawn again on this branch, so their rows are skipped.
    const CellMask rows = universe_ & ~(cfg_.enable_dedup ? dead_[ju] : chosen_[ju]);
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
      auto& tr = tracks_[ti];
      if (!tr.step || tr.step->trigger_level != j) continue;
      const HitTable* src = tr.active[ju];
      tr.cons_map.clear();
      std::size_t unhit = count_unhit(tr.state[ju], src->bits);
      std::size_t kept = gather(tr.state[ju], *src, tr.cons, rows, tr.step->cap, ti == 0 ? &tr.cons_map : nullptr);
      tr.cons.bits = kept;
      tr.active[ju] = &tr.cons;
      std::fill(tr.state[ju].begin(), tr.state[ju].end(), 0);
      ++stats_.consolidations;
      if (ti == 0) {
        cons_sets_.resize(kept);
        for (std::size_t i = 0; i < kept; ++i) cons_sets_[i] = sets1_[ju][tr.cons_map[i]];
        sets1_[ju] = cons_sets_.data();
        sets1_size_[ju] = kept;
        truncated_[ju] = truncated_[ju] || unhit > kept;
      }
    }
  }

  void free_fill(int j) {
    const auto ju = static_cast<std::size_t>(j);
    const int need = k_ - j;
    CellMask alive = universe_ & ~chosen_[ju];
    if (cfg_.enable_dedup) alive &= ~dead_[ju];
    if (alive.count() < need) return;
    alive_list_ = alive.indices();
    combo(chosen_[ju], 0, need, truncated_[ju]);
  }

  void combo(const CellMask& acc, std::size_t from, int need, bool verify) {
    if (need == 0) {
      emit(acc, verify);
      return;
    }
    const std::size_t n = alive_list_.size();
    for (std::size_t i = from; i + static_cast<std::size_t>(need) <= n; ++i) {
      CellMask next = acc;
      next.set(alive_list_[i]);
      combo(next, i + 1, need - 1, verify);
    }
  }

  void emit(const CellMask& h, bool verify) {
    if (verify)
      for (const auto& s : inst_.degree_one())
        if (!s.intersects(h)) return;
    if (!cfg_.enable_dedup && !seen_.insert(h).second) return;
    ++stats_.emitted;
    sink_(h);
  }

  struct MaskLess {
    bool operator()(const CellMask& a, const CellMask& b) const { return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi; }
  };

  const HittingInstance& inst_;
  const EngineConfig& cfg_;
  const HittingSink& sink_;
  int k_;
  CellMask universe_;
  std::vector<Track> tracks_;
  std::vector<const CellMask*> sets1_;
  std::vector<std::size_t> sets1_size_;
  std::vector<bool> truncated_;
  std::vector<CellMask> cons_sets_;
  std::vector<CellMask> dead_;
  std::vector<CellMask> chosen_;
  std::vector<int> alive_list_;
  std::set<CellMask, MaskLess> seen_;
  EngineStats stats_;
};

}  // namespace

EngineStats enumerate_hitting_sets(const HittingInstance& instance, const EngineConfig& config,
                                   const HittingSink& sink) {
  instance.validate();
  config.validate(instance.k);
  Engine engine(instance, config, sink);
  return engine.run();
}

std::vector<CellMask> brute_force_hitting_sets(const HittingInstance& instance, std::uint64_t budget) {
  instance.validate();
  const int n = instance.universe_size, k = instance.k;
  // C(n, k) with early exit past the budget.
  double approx = 1;
  for (int i = 0; i < k; ++i) approx = approx * (n - i) / (i + 1);
  if (approx > static_cast<double>(budget) * 1.0000001)
    throw BudgetExceeded("C(universe, k) exceeds the brute-force budget");
  const auto& sets = instance.degree_one();
  std::vector<CellMask> out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    CellMask h;
    for (int i : idx) h.set(i);
    if (std::all_of(sets.begin(), sets.end(), [&](const CellMask& s) { return s.intersects(h); })) out.push_back(h);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::sort(out.begin(), out.end(), index_order_less);
  return out;
}

namespace {
std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}
}  // namespace

HittingInstance parse_instance(std::string_view text) {
  HittingInstance inst;
  bool header = false;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim_ws(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      std::istringstream in{std::string(line)};
      if (!(in >> inst.universe_size >> inst.k))
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'universe k'");
      header = true;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'd: c1,c2,...'");
    auto dtext = trim_ws(line.substr(0, colon));
    int d = 0;
    if (std::from_chars(dtext.data(), dtext.data() + dtext.size(), d).ec != std::errc{})
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad degree");
    CellMask m;
    try {
      // Cell lists use the same comma-separated syntax as grid cell sets.
      auto rest = trim_ws(line.substr(colon + 1));
      while (!rest.empty()) {
        auto comma = rest.find(',');
        auto tok = trim_ws(rest.substr(0, comma));
        int v = -1;
        if (std::from_chars(tok.data(), tok.data() + tok.size(), v).ec != std::errc{} || v < 0 || v >= 128)
          throw std::invalid_argument("bad element");
        m.set(v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad element list");
    }
    inst.families[d].push_back(m);
  }
  if (!header) throw std::invalid_argument("missing 'universe k' header");
  inst.validate();
  return inst;
}

std::string format_instance(const HittingInstance& instance) {
  std::ostringstream out;
  out << instance.universe_size << ' ' << instance.k << '\n';
  for (const auto& [d, sets] : instance.families)
    for (const auto& s : sets) {
      out << d << ':';
      bool first = true;
      s.for_each([&](int c) {
        out << (first ? " " : ",") << c;
        first = false;
      });
      out << '\n';
    }
  return out.str();
}

}  // namespace critset
