#include "critset/checker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "critset/solver.hpp"
#include "critset/unavoidable.hpp"

namespace critset {

int default_max_set_size(const GridShape& shape) {
  switch (shape.side()) {
    case 4: return 8;
    case 6: return 10;
    default: return 12;
  }
}

std::size_t default_clique_cap(int degree) {
  switch (degree) {
    case 2: return 8192;
    case 3: return 16384;
    case 4: return 32768;
    case 5: return 32768;
    default: return 16384;
  }
}

std::size_t default_clique_start(int degree, int k, std::size_t m) {
  // 27 for degree 4 at k = 16, scaled by the number of clues still to come
  // when the degree is checked.
  const int remaining = std::max(0, k - degree + 1);
  auto scaled = static_cast<std::size_t>(std::lround(27.0 * remaining / 13.0));
  return std::max(static_cast<std::size_t>(degree - 1), std::min(scaled, m / 8));
}

SearchConfig SearchConfig::defaults_for(const GridShape& shape, int k) {
  SearchConfig c;
  c.max_set_size = default_max_set_size(shape);
  for (int d = 2; d <= 6; ++d) c.clique_caps[d] = default_clique_cap(d);
  c.engine = EngineConfig::defaults_for(k);
  return c;
}

SearchConfig SearchConfig::baseline(const GridShape& shape, int k) {
  SearchConfig c = defaults_for(shape, k);
  c.clique_degrees.clear();
  c.engine = EngineConfig::baseline();
  return c;
}

void SearchConfig::validate(int k) const {
  if (max_set_size < 4) throw std::invalid_argument("max_set_size must be >= 4");
  if (degree_one_cap < 1) throw std::invalid_argument("degree_one_cap must be >= 1");
  for (int d : clique_degrees)
    if (d < 2 || d > 6) throw std::invalid_argument("clique degrees must be in 2..6");
  for (const auto& [d, cap] : clique_caps)
    if (cap < 1) throw std::invalid_argument("clique caps must be >= 1");
  for (const auto& [d, start] : clique_starts)
    if (start < static_cast<std::size_t>(d - 1)) throw std::invalid_argument("clique start must be >= degree - 1");
  engine.validate(k);
}

namespace {

std::size_t clique_cap(const SearchConfig& c, int d) {
  auto it = c.clique_caps.find(d);
  return it == c.clique_caps.end() ? default_clique_cap(d) : it->second;
}

}  // namespace

GridSearchReport search_grid(const Grid& g, int k, const SearchConfig& config) {
  const GridShape& shape = g.shape();
  if (k < 1 || k > shape.cell_count()) throw std::invalid_argument("k must be in 1..cell count");
  config.validate(k);
  const auto start = std::chrono::steady_clock::now();

  GridSearchReport r;
  r.grid = format_grid(g);
  r.k = k;

  UnavoidableFamily fam = find_minimal_unavoidable(g, config.max_set_size);
  r.minimal_sets_found = fam.size();
  if (config.verify_sets) {
    // A set whose complement turns out to be uniquely completable would hide
    // puzzles; drop it and flag the grid.
    std::vector<CellMask> kept;
    kept.reserve(fam.sets.size());
    for (const auto& s : fam.sets) {
      if (is_unavoidable(g, s)) kept.push_back(s);
      else ++r.safety_failures;
    }
    fam.sets = std::move(kept);
  }
  fam.truncate(config.degree_one_cap);

  HittingInstance inst;
  inst.universe_size = shape.cell_count();
  inst.k = k;
  inst.families[1] = fam.sets;
  if (config.engine.enable_degree_pruning)
    for (int d : config.clique_degrees) {
      if (d > k || fam.size() < static_cast<std::size_t>(d)) continue;
      auto it = config.clique_starts.find(d);
      std::size_t st = it != config.clique_starts.end() ? it->second : default_clique_start(d, k, fam.size());
      auto cliques = build_cliques(fam, d, st, clique_cap(config, d));
      if (!cliques.sets.empty()) inst.families[d] = std::move(cliques.sets);
    }

  const Solver& solver = solver_for(shape);
  r.engine = enumerate_hitting_sets(inst, config.engine, [&](const CellMask& clues) {
    ++r.candidates;
    Givens givens = Givens::from_clues(g, clues);
    SolveOutcome out = solver.count_completions(givens, 2);
    if (out.count == 1) {
      if (out.completions.empty() || !(out.completions.front() == g)) ++r.safety_failures;
      else r.proper_puzzles.push_back(clues);
    } else if (out.count >= 2) {
      if (!verify_two_completions(givens, out)) ++r.safety_failures;
    } else {
      ++r.safety_failures;  // clues taken from g always complete to g
    }
  });
  std::sort(r.proper_puzzles.begin(), r.proper_puzzles.end(), index_order_less);
  r.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

GridSearchReport search_grid(const Grid& g, int k) {
  return search_grid(g, k, SearchConfig::defaults_for(g.shape(), k));
}

namespace {

std::string format_report_impl(const GridSearchReport& r, bool with_time) {
  std::ostringstream out;
  out << r.grid << '\t' << r.k << '\t' << r.minimal_sets_found << '\t' << r.candidates << '\t'
      << r.proper_found() << '\t';
  if (with_time) out << r.elapsed_ms;
  else out << '-';
  if (r.safety_failures) out << "\tsafety_failures=" << r.safety_failures;
  out << '\n';
  for (const auto& p : r.proper_puzzles) out << '\t' << format_cells(p) << '\n';
  return out.str();
}

}  // namespace

std::string format_report(const GridSearchReport& r) { return format_report_impl(r, true); }
std::string format_report_stable(const GridSearchReport& r) { return format_report_impl(r, false); }

std::string report_header(const SearchConfig& config, int k) {
  std::ostringstream out;
  out << "# checker v" << kCheckerVersion << " k=" << k << '\n';
  std::istringstream lines(config.to_text());
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  return out.str();
}

std::string format_record(const CatalogRecord& r) {
  if (r.report) return format_report(*r.report);
  return "error\t" + std::to_string(r.line_no) + '\t' + r.error + '\n';
}

void search_catalog(std::istream& in, int k, const std::function<SearchConfig(const GridShape&)>& config_for,
                    const std::function<void(const CatalogRecord&)>& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    CatalogRecord rec;
    rec.line_no = line_no;
    try {
      Grid g = parse_grid(line);
      rec.report = search_grid(g, k, config_for(g.shape()));
    } catch (const GridError& e) {
      rec.error = e.what();
    } catch (const std::invalid_argument& e) {
      rec.error = e.what();
    }
    sink(rec);
  }
}

std::vector<CellMask> brute_force_proper(const Grid& g, int k, std::uint64_t budget) {
  HittingInstance inst;
  inst.universe_size = g.shape().cell_count();
  inst.k = k;
  std::vector<CellMask> out;
  for (const auto& clues : brute_force_hitting_sets(inst, budget))
    if (count_completions(Givens::from_clues(g, clues), 2).count == 1) out.push_back(clues);
  return out;
}

}  // namespace critset
