#include <benchmark/benchmark.h>

#include <random>

#include "critset/checker.hpp"
#include "critset/hitting.hpp"
#include "critset/solver.hpp"
#include "critset/symmetry.hpp"
#include "critset/unavoidable.hpp"

using namespace critset;

namespace {

Grid sample_grid(const GridShape& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_grid(s, rng);
}

void BM_SolverCount17(benchmark::State& state) {
  Givens gv = parse_givens("000000010400000000020000000000050407008000300001090000300400200050100000000806000");
  for (auto _ : state) benchmark::DoNotOptimize(count_completions(gv, 2).count);
}
BENCHMARK(BM_SolverCount17);

void BM_SolverUnavoidableCheck(benchmark::State& state) {
  Grid g = sample_grid(GridShape::s9x9(), 1);
  auto fam = find_minimal_unavoidable(g, 8);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(is_unavoidable(g, fam.sets[i++ % fam.sets.size()]));
}
BENCHMARK(BM_SolverUnavoidableCheck);

void BM_Minlex9x9(benchmark::State& state) {
  Grid g = sample_grid(GridShape::s9x9(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(minlex(g));
}
BENCHMARK(BM_Minlex9x9)->Unit(benchmark::kMillisecond);

void BM_FindUnavoidable(benchmark::State& state) {
  Grid g = sample_grid(GridShape::s9x9(), 3);
  const int max_size = static_cast<int>(state.range(0));
  std::size_t n = 0;
  for (auto _ : state) n = find_minimal_unavoidable(g, max_size).size();
  state.counters["sets"] = static_cast<double>(n);
}
BENCHMARK(BM_FindUnavoidable)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Con8(benchmark::State& state) {
  std::uint8_t m = 0x5a, b = 0x3c;
  for (auto _ : state) {
    benchmark::DoNotOptimize(con8(m, b));
    ++m;
    b = static_cast<std::uint8_t>(b * 5 + 1);
  }
}
BENCHMARK(BM_Con8);

void BM_Consolidate(benchmark::State& state) {
  Grid g = sample_grid(GridShape::s9x9(), 4);
  auto fam = find_minimal_unavoidable(g, 12);
  HitTable table = make_hit_table(81, fam.sets);
  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> hit(table.words);
  for (auto& w : hit) w = rng() | rng();
  for (auto _ : state) benchmark::DoNotOptimize(consolidate(hit, table, 1536));
}
BENCHMARK(BM_Consolidate)->Unit(benchmark::kMicrosecond);

// Full hitting-set enumeration for one grid, optimized against baseline.
void BM_Enumerate(benchmark::State& state) {
  Grid g = sample_grid(GridShape::s9x9(), 6);
  const int k = static_cast<int>(state.range(0));
  const bool baseline = state.range(1) != 0;
  SearchConfig cfg = baseline ? SearchConfig::baseline(g.shape(), k) : SearchConfig::defaults_for(g.shape(), k);
  auto fam = find_minimal_unavoidable(g, cfg.max_set_size);
  HittingInstance inst;
  inst.universe_size = 81;
  inst.k = k;
  inst.families[1] = fam.sets;
  if (!baseline)
    for (int d : cfg.clique_degrees)
      if (d <= k) inst.families[d] = build_cliques(fam, d, default_clique_start(d, k, fam.size()), default_clique_cap(d)).sets;
  std::uint64_t emitted = 0;
  for (auto _ : state) emitted = enumerate_hitting_sets(inst, cfg.engine, [](const CellMask&) {}).emitted;
  state.counters["emitted"] = static_cast<double>(emitted);
}
BENCHMARK(BM_Enumerate)->Args({10, 0})->Args({10, 1})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

void BM_SearchGrid4x4(benchmark::State& state) {
  Grid g = parse_grid("1234341223414123");
  for (auto _ : state) benchmark::DoNotOptimize(search_grid(g, 4).proper_found());
}
BENCHMARK(BM_SearchGrid4x4)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
