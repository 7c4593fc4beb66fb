#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "critset/checker.hpp"
#include "critset/config.hpp"
#include "critset/grid.hpp"
#include "critset/hitting.hpp"
#include "critset/solver.hpp"
#include "critset/symmetry.hpp"
#include "critset/taskfarm.hpp"
#include "critset/unavoidable.hpp"

using namespace critset;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSafety = 3;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads `path`, or stdin for "" or "-".
std::string slurp(const std::string& path) {
  std::stringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

template <typename F>
int for_each_line(const std::string& path, F&& f) {
  std::istringstream in(slurp(path));
  int errors = 0;
  std::size_t no = 0;
  for (std::string line; std::getline(in, line);) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      f(line);
    } catch (const std::exception& e) {
      std::cerr << "line " << no << ": " << e.what() << '\n';
      ++errors;
    }
  }
  return errors;
}

int cmd_solve(const std::string& input) {
  int errors = for_each_line(input, [](const std::string& line) {
    Givens g = parse_givens(line);
    SolveOutcome out = count_completions(g, 2);
    std::cout << (out.count >= 2 ? "2+" : std::to_string(out.count));
    if (out.count == 1) std::cout << '\t' << format_grid(out.completions.front());
    std::cout << '\n';
  });
  return errors ? kExitData : 0;
}

int cmd_canon(const std::string& input) {
  int errors = for_each_line(input, [](const std::string& line) {
    std::cout << format_grid(minlex(parse_grid(line)).grid) << '\n';
  });
  return errors ? kExitData : 0;
}

int cmd_catalog(const std::string& shape_text, bool count_only) {
  GridShape shape = parse_shape(shape_text);
  std::vector<Grid> reps;
  CatalogSummary s = catalog(shape, [&](const Grid& g) { reps.push_back(g); });
  std::cout << "completions " << s.total_completions << " representatives " << s.representatives << '\n';
  if (!count_only)
    for (const auto& g : reps) std::cout << format_grid(g) << '\n';
  return 0;
}

int cmd_unavoidable(const std::string& input, int max_size) {
  int errors = for_each_line(input, [&](const std::string& line) {
    Grid g = parse_grid(line);
    int m = max_size > 0 ? max_size : default_max_set_size(g.shape());
    UnavoidableFamily fam = find_minimal_unavoidable(g, m);
    std::cout << "# " << format_grid(g) << '\t' << fam.size() << '\n';
    for (const auto& s : fam.sets) std::cout << format_cells(s) << '\n';
  });
  return errors ? kExitData : 0;
}

int cmd_cliques(const std::string& input, int degree, int max_size, long start, std::size_t cap, int k) {
  int errors = for_each_line(input, [&](const std::string& line) {
    Grid g = parse_grid(line);
    int m = max_size > 0 ? max_size : default_max_set_size(g.shape());
    UnavoidableFamily fam = find_minimal_unavoidable(g, m);
    fam.truncate(SearchConfig{}.degree_one_cap);
    std::size_t st = start >= 0 ? static_cast<std::size_t>(start) : default_clique_start(degree, k, fam.size());
    UnavoidableFamily cl = build_cliques(fam, degree, st, cap > 0 ? cap : default_clique_cap(degree));
    std::cout << "# " << format_grid(g) << '\t' << cl.size() << '\n';
    for (const auto& s : cl.sets) std::cout << cl.degree << '\t' << format_cells(s) << '\n';
  });
  return errors ? kExitData : 0;
}

struct EngineFlags {
  bool no_dedup = false, no_pruning = false, no_consolidation = false, no_effective = false;
  bool baseline = false, brute = false, stats = false;
};

int cmd_hitset(const std::string& input, const EngineFlags& f) {
  HittingInstance inst = parse_instance(slurp(input));
  if (f.brute) {
    for (const auto& s : brute_force_hitting_sets(inst)) std::cout << format_cells(s) << '\n';
    return 0;
  }
  EngineConfig cfg = f.baseline ? EngineConfig::baseline() : EngineConfig::defaults_for(inst.k);
  if (f.no_dedup) cfg.enable_dedup = false;
  if (f.no_pruning) cfg.enable_degree_pruning = false;
  if (f.no_consolidation) cfg.enable_consolidation = false;
  if (f.no_effective) cfg.enable_effective_size = false;
  std::string buf;
  EngineStats st = enumerate_hitting_sets(inst, cfg, [&](const CellMask& s) {
    buf += format_cells(s);
    buf += '\n';
    if (buf.size() > (1u << 16)) {
      std::cout << buf;
      buf.clear();
    }
  });
  std::cout << buf;
  if (f.stats)
    std::cerr << "nodes " << st.nodes << " emitted " << st.emitted << " pruned " << st.pruned_by_degree << " cut "
              << st.cut_dead << " consolidations " << st.consolidations << '\n';
  return 0;
}

RunConfig run_config(const std::string& path, int k) {
  RunConfig rc = path.empty() ? RunConfig{} : load_run_config(path);
  if (k > 0) rc.k = k;
  return rc;
}

int cmd_search(const std::string& input, const std::string& config_path, int k, bool baseline) {
  RunConfig rc = run_config(config_path, k);
  auto config_for = [&](const GridShape& s) {
    return baseline ? SearchConfig::baseline(s, rc.k) : rc.search_config(s);
  };
  std::istringstream in(slurp(input));
  bool data_error = false, safety = false;
  std::optional<GridShape> header_shape;
  search_catalog(in, rc.k, config_for, [&](const CatalogRecord& r) {
    if (r.report) {
      GridShape s = parse_grid(r.report->grid).shape();
      if (header_shape != s) std::cout << report_header(config_for(s), rc.k);
      header_shape = s;
    }
    std::cout << format_record(r) << std::flush;
    if (!r.report) data_error = true;
    else if (r.report->safety_failures) safety = true;
  });
  if (safety) return kExitSafety;
  return data_error ? kExitData : 0;
}

struct FarmArgs {
  std::string input, checkpoint, out, config;
  std::size_t workers = 1, batch = 16;
  int k = 0;
  double time_budget = 0;
  bool merge = false;
};

int cmd_farm(const FarmArgs& a) {
  if (a.merge) {
    bool safety = false;
    for (const auto& rec : merge_outputs(a.out))
      for (const auto& g : rec.grid_records) {
        std::cout << g;
        if (g.find("\tsafety_failures=") != std::string::npos) safety = true;
      }
    return safety ? kExitSafety : 0;
  }
  if (a.input.empty() || a.checkpoint.empty() || a.out.empty())
    throw CLI::ValidationError("farm needs --input, --checkpoint and --out");
  RunConfig rc = run_config(a.config, a.k);
  FarmOptions o;
  o.catalogue_path = a.input;
  o.k = rc.k;
  o.workers = a.workers;
  o.batch_size = a.batch;
  o.checkpoint_path = a.checkpoint;
  o.output_path = a.out;
  if (a.time_budget > 0) o.time_budget_s = a.time_budget;
  o.config_for = [rc](const GridShape& s) { return rc.search_config(s); };
  FarmSummary s = run_farm(o);
  std::cerr << "batches " << s.batches_total << " already_done " << s.batches_already_done << " recorded "
            << s.batches_recorded << " abandoned " << s.batches_abandoned << " worker_failures " << s.worker_failures
            << " grids " << s.grids_searched << " workers " << s.workers_used << (s.finished ? " finished" : " partial")
            << '\n';
  return 0;
}

int cmd_verify_scs(int side, const std::string& total, int claimed) {
  std::cout << (verify_scs_bracket(side, total, claimed) ? "true" : "false") << '\n';
  return 0;
}

int cmd_bench(const std::string& shape_text, int grids, int k, std::uint64_t seed) {
  GridShape shape = parse_shape(shape_text);
  std::mt19937_64 rng(seed);
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  double t_grid = 0, t_find = 0, t_search = 0;
  std::size_t sets = 0;
  std::uint64_t candidates = 0, nodes = 0;
  for (int i = 0; i < grids; ++i) {
    auto t0 = clock::now();
    Grid g = random_grid(shape, rng);
    auto t1 = clock::now();
    sets += find_minimal_unavoidable(g, default_max_set_size(shape)).size();
    auto t2 = clock::now();
    GridSearchReport r = search_grid(g, k);
    auto t3 = clock::now();
    t_grid += ms(t1 - t0);
    t_find += ms(t2 - t1);
    t_search += ms(t3 - t2);
    candidates += r.candidates;
    nodes += r.engine.nodes;
  }
  const double n = std::max(1, grids);
  std::printf("shape %s grids %d k %d\n", shape_text.c_str(), grids, k);
  std::printf("random_grid   %10.2f ms/grid\n", t_grid / n);
  std::printf("find_minimal  %10.2f ms/grid  %.1f sets/grid\n", t_find / n, static_cast<double>(sets) / n);
  std::printf("search_grid   %10.2f ms/grid  %.1f candidates/grid  %.0f nodes/grid\n", t_search / n,
              static_cast<double>(candidates) / n, static_cast<double>(nodes) / n);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search sudoku solution grids for proper puzzles with a given number of clues", "critset"};
  app.require_subcommand(1);

  std::string input;
  auto* solve = app.add_subcommand("solve", "Count completions of puzzles (one per line)");
  solve->add_option("input", input, "Puzzle file (default stdin)");

  auto* canon = app.add_subcommand("canon", "Print the minlex form of each grid");
  canon->add_option("input", input, "Grid file (default stdin)");

  std::string shape = "4x4";
  bool count_only = false;
  auto* cat = app.add_subcommand("catalog", "Enumerate essentially different grids of a small shape");
  cat->add_option("--shape", shape, "4x4 or 6x6")->capture_default_str();
  cat->add_flag("--count-only", count_only, "Print only the banner");

  int max_size = 0;
  auto* unav = app.add_subcommand("unavoidable", "Minimal unavoidable sets of each grid");
  unav->add_option("input", input, "Grid file (default stdin)");
  unav->add_option("--max-size", max_size, "Largest set size (default by shape)");

  int degree = 2, k = 0;
  long start = -1;
  std::size_t cap = 0;
  auto* clq = app.add_subcommand("cliques", "Unions of pairwise-disjoint minimal unavoidable sets");
  clq->add_option("input", input, "Grid file (default stdin)");
  clq->add_option("--degree", degree, "Clique size")->check(CLI::Range(2, 6));
  clq->add_option("--max-size", max_size, "Largest minimal set size (default by shape)");
  clq->add_option("--start", start, "Outer loop start index (default by degree and k)");
  clq->add_option("--cap", cap, "Maximum number of cliques (default by degree)");
  clq->add_option("--k", k, "Clue count the cliques are meant for")->default_val(16);

  EngineFlags ef;
  auto* hit = app.add_subcommand("hitset", "Enumerate k-element hitting sets of an instance file");
  hit->add_option("input", input, "Instance file (default stdin)");
  hit->add_flag("--no-dedup", ef.no_dedup, "Disable dead-cell once-only enumeration");
  hit->add_flag("--no-pruning", ef.no_pruning, "Ignore families of degree >= 2");
  hit->add_flag("--no-consolidation", ef.no_consolidation, "Never compact hitting vectors");
  hit->add_flag("--no-effective-size", ef.no_effective, "Select the first unhit set");
  hit->add_flag("--baseline", ef.baseline, "Plain enumeration, all optimizations off");
  hit->add_flag("--brute-force", ef.brute, "Check every k-subset instead");
  hit->add_flag("--stats", ef.stats, "Print engine counters to stderr");

  std::string config_path;
  bool baseline = false;
  auto* search = app.add_subcommand("search", "Search each grid for proper k-clue puzzles");
  search->add_option("input", input, "Grid file (default stdin)");
  search->add_option("--k", k, "Clue count (default 16 or from config)");
  search->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  search->add_flag("--baseline", baseline, "Degree-1 family and plain enumeration only");

  FarmArgs fa;
  auto* farm = app.add_subcommand("farm", "Search a catalogue file in checkpointed batches");
  farm->add_option("--input", fa.input, "Catalogue file");
  farm->add_option("--workers", fa.workers, "Worker threads (capped by CHECKER_THREADS)")->check(CLI::PositiveNumber);
  farm->add_option("--batch", fa.batch, "Grids per batch")->check(CLI::PositiveNumber)->capture_default_str();
  farm->add_option("--checkpoint", fa.checkpoint, "Checkpoint file");
  farm->add_option("--out", fa.out, "Output file of batch records");
  farm->add_option("--time-budget", fa.time_budget, "Seconds before in-flight batches are abandoned");
  farm->add_option("--k", fa.k, "Clue count (default 16 or from config)");
  farm->add_option("--config", fa.config, "key=value config file")->check(CLI::ExistingFile);
  farm->add_flag("--merge", fa.merge, "Print the merged reports of --out in catalogue order");

  int side = 0, claimed = 0;
  std::string total;
  auto* scs = app.add_subcommand("verify-scs", "Check the product bracket for a smallest critical set size");
  scs->add_option("side", side, "Grid side n")->required()->check(CLI::PositiveNumber);
  scs->add_option("total", total, "Number of completed grids")->required();
  scs->add_option("scs", claimed, "Claimed smallest critical set size")->required()->check(CLI::PositiveNumber);

  int grids = 3;
  std::uint64_t seed = 1;
  auto* bench = app.add_subcommand("bench", "Time the pipeline stages on random grids");
  bench->add_option("--shape", shape, "Grid shape")->capture_default_str();
  bench->add_option("--grids", grids, "Number of random grids")->capture_default_str();
  bench->add_option("--k", k, "Clue count")->default_val(4);
  bench->add_option("--seed", seed, "Random seed")->capture_default_str();

  if (argc <= 1) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(input);
    if (*canon) return cmd_canon(input);
    if (*cat) return cmd_catalog(shape, count_only);
    if (*unav) return cmd_unavoidable(input, max_size);
    if (*clq) return cmd_cliques(input, degree, max_size, start, cap, k);
    if (*hit) return cmd_hitset(input, ef);
    if (*search) return cmd_search(input, config_path, k, baseline);
    if (*farm) return cmd_farm(fa);
    if (*scs) return cmd_verify_scs(side, total, claimed);
    if (*bench) return cmd_bench(shape, grids, k, seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
