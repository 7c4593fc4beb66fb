// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [--extended] [--only N]
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <unistd.h>

#include "critset/checker.hpp"
#include "critset/hitting.hpp"
#include "critset/solver.hpp"
#include "critset/symmetry.hpp"
#include "critset/taskfarm.hpp"
#include "critset/unavoidable.hpp"
#include "hitting_instances.hpp"
#include "oracles.hpp"

using namespace critset;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // wall-clock limit, checked after the run
  std::function<Outcome()> run;
};

CellMask mask(std::initializer_list<int> cells) {
  CellMask m;
  for (int c : cells) m.set(c);
  return m;
}

std::vector<Grid> reps_4x4() {
  std::vector<Grid> reps;
  catalog(GridShape::s4x4(), [&](const Grid& g) { reps.push_back(g); });
  return reps;
}

Outcome c1_catalogue() {
  auto s = catalog(GridShape::s4x4(), [](const Grid&) {});
  return {s.total_completions == 288, "completions=" + std::to_string(s.total_completions) +
                                          " representatives=" + std::to_string(s.representatives)};
}

Outcome c2_scs4() {
  bool ok = true;
  std::string detail;
  for (const auto& g : reps_4x4()) {
    auto r3 = search_grid(g, 3);
    auto r4 = search_grid(g, 4);
    bool same = oracle::as_set(r4.proper_puzzles) == oracle::proper_puzzles(g, 4);
    ok = ok && r3.proper_found() == 0 && same && r3.safety_failures == 0 && r4.safety_failures == 0;
    detail += format_grid(g) + ":k3=" + std::to_string(r3.proper_found()) + ",k4=" +
              std::to_string(r4.proper_found()) + (same ? "(oracle ok) " : "(ORACLE MISMATCH) ");
  }
  return {ok, detail};
}

Outcome c3_engine_oracle() {
  std::mt19937_64 rng(20260101);
  std::size_t instances = 0, mismatches = 0, duplicates = 0, emitted = 0;
  for (; instances < 200; ++instances) {
    HittingInstance inst = testing_support::random_instance(rng, 40, 6, 30);
    auto want = oracle::as_set(brute_force_hitting_sets(inst));
    for (int flags = 0; flags < 16; ++flags) {
      EngineConfig cfg = testing_support::config_with_flags(inst.k, flags, rng);
      std::vector<CellMask> got;
      enumerate_hitting_sets(inst, cfg, [&](const CellMask& m) { got.push_back(m); });
      auto got_set = oracle::as_set(got);
      duplicates += got.size() - got_set.size();
      mismatches += got_set != want;
      emitted += got.size();
    }
  }
  return {mismatches == 0 && duplicates == 0,
          std::to_string(instances) + " instances x 16 configs, " + std::to_string(emitted) + " sets, mismatches=" +
              std::to_string(mismatches) + " duplicates=" + std::to_string(duplicates)};
}

Outcome c4_worked_instance() {
  HittingInstance inst;
  inst.universe_size = 81;
  inst.k = 2;
  inst.families[1] = {mask({0, 3, 9, 12}), mask({0, 1, 27, 28}), mask({3, 4, 66, 67})};
  auto want = oracle::hitting_sets(81, 2, inst.families[1]);
  std::vector<CellMask> got;
  enumerate_hitting_sets(inst, EngineConfig::defaults_for(2), [&](const CellMask& m) { got.push_back(m); });
  return {got.size() == 7 && oracle::as_set(got) == want, "sets=" + std::to_string(got.size())};
}

Outcome c5_con8() {
  // Slots listed from the least significant bit.
  const std::uint8_t m = 0b01010110, b = 0b01001011, want = 0b00000011;
  bool example = con8(m, b) == want;
  std::size_t bad = 0;
  for (unsigned x = 0; x < 256; ++x)
    for (unsigned y = 0; y < 256; ++y)
      bad += con8(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)) !=
             con8_reference(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y));
  return {example && bad == 0, std::string("worked example ") + (example ? "ok" : "WRONG") +
                                   ", table mismatches=" + std::to_string(bad) + "/65536"};
}

Outcome c6_finder_4x4() {
  auto all = oracle::all_grids(GridShape::s4x4());
  bool ok = true;
  std::size_t sets = 0;
  for (const auto& g : reps_4x4()) {
    // Both at the default size limit and with no effective limit.
    ok = ok && oracle::as_set(find_minimal_unavoidable(g, 8).sets) ==
                   oracle::as_set(oracle::minimal_unavoidable(g, all, 8));
    auto fam = find_minimal_unavoidable(g, 16);
    ok = ok && oracle::as_set(fam.sets) == oracle::as_set(oracle::minimal_unavoidable(g, all, 16));
    for (const auto& u : fam.sets) {
      ok = ok && is_unavoidable(g, u) && is_minimal(g, u) && digits_occur_twice(g, u) &&
           unit_intersections_ok(g.shape(), u);
      ++sets;
    }
  }
  return {ok, std::to_string(sets) + " sets checked"};
}

Outcome c7_set_counts() {
  std::mt19937_64 rng(7);
  const int grids = 20;
  std::size_t total = 0, lo = SIZE_MAX, hi = 0;
  for (int i = 0; i < grids; ++i) {
    auto n = find_minimal_unavoidable(random_grid(GridShape::s9x9(), rng), 12).size();
    total += n;
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  double mean = static_cast<double>(total) / grids;
  char buf[128];
  std::snprintf(buf, sizeof buf, "mean=%.1f min=%zu max=%zu over %d grids", mean, lo, hi, grids);
  return {mean >= 200 && mean <= 500, buf};
}

Outcome c8_sixteen() {
  const char* puzzles[] = {
      "000000010400000000020000000000050407008000300001090000300400200050100000000806000",
      "000000012000035000000600070700000300000400800100000000000120000080000040050000600",
      "000000012003600000000007000410020000000500300700000600280000040000300500000000000",
  };
  bool ok = true;
  std::string detail;
  for (const char* p : puzzles) {
    auto sol = count_completions(parse_givens(p), 2);
    if (sol.count != 1) return {false, std::string("not a proper puzzle: ") + p};
    auto t0 = std::chrono::steady_clock::now();
    auto r = search_grid(sol.completions[0], 16);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && r.proper_found() == 0 && r.safety_failures == 0 && secs <= 900;
    char buf[160];
    std::snprintf(buf, sizeof buf, "[sets=%zu candidates=%llu proper=%zu %.1fs] ", r.minimal_sets_found,
                  static_cast<unsigned long long>(r.candidates), r.proper_found(), secs);
    detail += buf;
  }
  return {ok, detail};
}

Outcome c9_invariance() {
  std::mt19937_64 rng(9);
  const auto reps = reps_4x4();
  std::size_t differ = 0;
  for (int i = 0; i < 100; ++i) {
    Grid g = apply(Transformation::random(GridShape::s4x4(), rng), reps[static_cast<std::size_t>(i) % reps.size()]);
    Grid h = apply(Transformation::random(g.shape(), rng), g);
    differ += search_grid(g, 4).proper_found() != search_grid(h, 4).proper_found();
  }
  for (int i = 0; i < 20; ++i) {
    Grid g = random_grid(GridShape::s9x9(), rng);
    Grid h = apply(Transformation::random(g.shape(), rng), g);
    differ += search_grid(g, 10).proper_found() != search_grid(h, 10).proper_found();
  }
  return {differ == 0, "120 pairs, differing=" + std::to_string(differ)};
}

std::multiset<std::string> merged_stable(const std::string& output) {
  std::multiset<std::string> out;
  for (const auto& rec : merge_outputs(output))
    for (const auto& g : rec.grid_records) out.insert(stable_record(g));
  return out;
}

Outcome c10_farm() {
  const fs::path dir = fs::temp_directory_path() / ("critset_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cat = (dir / "grids.txt").string();
  {
    std::mt19937_64 rng(10);
    std::ofstream out(cat);
    for (int i = 0; i < 50; ++i) out << format_grid(random_grid(i % 2 ? GridShape::s4x4() : GridShape::s6x6(), rng)) << '\n';
  }
  auto opts = [&](const std::string& tag) {
    FarmOptions o;
    o.catalogue_path = cat;
    o.k = 6;
    o.workers = 2;
    o.batch_size = 4;
    o.checkpoint_path = (dir / (tag + ".ckpt")).string();
    o.output_path = (dir / (tag + ".out")).string();
    o.respect_env = false;
    return o;
  };
  auto ref = opts("ref");
  run_farm(ref);
  const auto want = merged_stable(ref.output_path);
  using P = FaultInjection::Point;
  const std::pair<std::size_t, P> kills[] = {
      {1, P::kBeforeCheckpoint}, {2, P::kTornRecord}, {4, P::kAfterCheckpoint}, {7, P::kTornRecord}, {13, P::kBeforeCheckpoint}};
  std::size_t bad = 0, i = 0;
  for (auto [at, point] : kills) {
    auto o = opts("run" + std::to_string(i++));
    o.fault.kill_at_record = at;
    o.fault.point = point;
    bool killed = false;
    try {
      run_farm(o);
    } catch (const FarmKilled&) {
      killed = true;
    }
    o.fault = {};
    auto s = run_farm(o);
    bad += !killed || !s.finished || merged_stable(o.output_path) != want;
  }
  fs::remove_all(dir);
  return {bad == 0 && want.size() == 50, "5 kill points, " + std::to_string(want.size()) +
                                             " grid records, differing runs=" + std::to_string(bad)};
}

Outcome c11_bracket() {
  bool ok = verify_scs_bracket(4, "288", 4) && verify_scs_bracket(6, "28200960", 8) &&
            verify_scs_bracket(8, "29136487207403520", 14) &&
            verify_scs_bracket(9, "6670903752021072936960", 17) && !verify_scs_bracket(4, "288", 5);
  return {ok, "four table rows true, (4, 288, 5) false"};
}

Outcome c12_six_by_six() {
  std::vector<Grid> reps;
  auto summary = catalog(GridShape::s6x6(), [&](const Grid& g) { reps.push_back(g); });
  std::size_t proper = 0, failures = 0, grids_with_8 = 0;
  std::uint64_t candidates = 0;
  for (const auto& g : reps) {
    auto r = search_grid(g, 7);
    proper += r.proper_found();
    failures += r.safety_failures;
    candidates += r.candidates;
    // The bound is tight: some grid has an 8-clue puzzle.
    if (!grids_with_8) {
      auto r8 = search_grid(g, 8);
      grids_with_8 += r8.proper_found() > 0;
      failures += r8.safety_failures;
    }
  }
  return {summary.total_completions == 28200960 && proper == 0 && failures == 0 && grids_with_8 > 0,
          "completions=" + std::to_string(summary.total_completions) + " representatives=" +
              std::to_string(reps.size()) + " k7 candidates=" + std::to_string(candidates) +
              " k7 proper=" + std::to_string(proper) + " k8 found=" + (grids_with_8 ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  bool extended = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--extended")) extended = true;
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--extended] [--only N]\n", argv[0]);
      return 1;
    }
  }
  std::vector<Criterion> all = {
      {1, "4x4 catalogue has 288 completions", 1, c1_catalogue},
      {2, "scs(4) = 4 against the exhaustive oracle", 60, c2_scs4},
      {3, "hitting engine equals brute force under all 16 configs", 120, c3_engine_oracle},
      {4, "worked hitting instance gives 7 sets", 1, c4_worked_instance},
      {5, "con8 worked example and full table", 1, c5_con8},
      {6, "unavoidable finder complete on 4x4", 120, c6_finder_4x4},
      {7, "9x9 mean minimal set count in [200, 500]", 600, c7_set_counts},
      {8, "no 16-clue puzzle in three 17-clue solution grids", 2700, c8_sixteen},
      {9, "proper counts invariant under equivalence", 600, c9_invariance},
      {10, "task farm output survives kills and resumes", 300, c10_farm},
      {11, "scs bracket inequality", 1, c11_bracket},
  };
  if (extended) all.push_back({12, "6x6: 28200960 completions, scs(6) = 8", 36000, c12_six_by_six});

  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.budget_s;
    bool pass = out.ok && in_time;
    failed += !pass;
    std::printf("criterion %2d: %s  %-55s %8.2fs (limit %.0fs)  %s%s\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                secs, c.budget_s, out.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria passed");
  return failed ? 1 : 0;
}
