#include "critset/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace critset {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_number(const std::string& key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

// "prefix.D" -> D
std::optional<int> degree_suffix(const std::string& key, std::string_view prefix) {
  if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  int d = parse_number<int>(key, std::string_view(key).substr(prefix.size()));
  if (d < 1 || d > 16) throw ConfigError(key + ": degree out of range");
  return d;
}

const char* b(bool v) { return v ? "true" : "false"; }

}  // namespace

void apply_setting(SearchConfig& c, const std::string& key, const std::string& value) {
  auto& e = c.engine;
  auto& s = e.selection;
  if (key == "max_set_size") c.max_set_size = parse_number<int>(key, value);
  else if (key == "degree_one_cap") c.degree_one_cap = parse_number<std::size_t>(key, value);
  else if (key == "verify_sets") c.verify_sets = parse_bool(key, value);
  else if (key == "clique_degrees") {
    c.clique_degrees.clear();
    std::string_view rest = value;
    while (!rest.empty()) {
      auto comma = rest.find(',');
      auto tok = trim(rest.substr(0, comma));
      if (!tok.empty()) c.clique_degrees.push_back(parse_number<int>(key, tok));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  } else if (key == "engine.dedup") e.enable_dedup = parse_bool(key, value);
  else if (key == "engine.degree_pruning") e.enable_degree_pruning = parse_bool(key, value);
  else if (key == "engine.consolidation") e.enable_consolidation = parse_bool(key, value);
  else if (key == "engine.effective_size") e.enable_effective_size = parse_bool(key, value);
  else if (key == "selection.full_scan_until") s.full_scan_until = parse_number<int>(key, value);
  else if (key == "selection.window_level") s.window_level = parse_number<int>(key, value);
  else if (key == "selection.window") s.window = parse_number<std::size_t>(key, value);
  else if (key == "selection.unhit_level") s.unhit_level = parse_number<int>(key, value);
  else if (key == "selection.unhit_count") s.unhit_count = parse_number<std::size_t>(key, value);
  else if (auto d = degree_suffix(key, "clique_cap.")) c.clique_caps[*d] = parse_number<std::size_t>(key, value);
  else if (auto d = degree_suffix(key, "clique_start.")) c.clique_starts[*d] = parse_number<std::size_t>(key, value);
  else if (auto d = degree_suffix(key, "pruning_level.")) e.pruning_levels[*d] = parse_number<int>(key, value);
  else if (auto d = degree_suffix(key, "consolidate.")) {
    if (value == "off") {
      e.consolidation.erase(*d);
      return;
    }
    auto colon = value.find(':');
    if (colon == std::string::npos) throw ConfigError(key + ": expected level:cap or off");
    e.consolidation[*d] = {parse_number<int>(key, std::string_view(value).substr(0, colon)),
                           parse_number<std::size_t>(key, std::string_view(value).substr(colon + 1))};
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::string SearchConfig::to_text() const {
  std::map<std::string, std::string> kv;
  kv["max_set_size"] = std::to_string(max_set_size);
  kv["degree_one_cap"] = std::to_string(degree_one_cap);
  kv["verify_sets"] = b(verify_sets);
  std::string degs;
  for (int d : clique_degrees) degs += (degs.empty() ? "" : ",") + std::to_string(d);
  kv["clique_degrees"] = degs;
  for (const auto& [d, cap] : clique_caps) kv["clique_cap." + std::to_string(d)] = std::to_string(cap);
  for (const auto& [d, st] : clique_starts) kv["clique_start." + std::to_string(d)] = std::to_string(st);
  kv["engine.dedup"] = b(engine.enable_dedup);
  kv["engine.degree_pruning"] = b(engine.enable_degree_pruning);
  kv["engine.consolidation"] = b(engine.enable_consolidation);
  kv["engine.effective_size"] = b(engine.enable_effective_size);
  for (const auto& [d, step] : engine.consolidation)
    kv["consolidate." + std::to_string(d)] = std::to_string(step.trigger_level) + ":" + std::to_string(step.cap);
  for (const auto& [d, lvl] : engine.pruning_levels) kv["pruning_level." + std::to_string(d)] = std::to_string(lvl);
  kv["selection.full_scan_until"] = std::to_string(engine.selection.full_scan_until);
  kv["selection.window_level"] = std::to_string(engine.selection.window_level);
  kv["selection.window"] = std::to_string(engine.selection.window);
  kv["selection.unhit_level"] = std::to_string(engine.selection.unhit_level);
  kv["selection.unhit_count"] = std::to_string(engine.selection.unhit_count);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

SearchConfig RunConfig::search_config(const GridShape& s) const {
  SearchConfig c = SearchConfig::defaults_for(s, k);
  for (const auto& [key, value] : search_overrides) apply_setting(c, key, value);
  try {
    c.validate(k);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  if (shape) {
    const std::string side = std::to_string(shape->side());
    out << "shape=" << (parse_shape(side + "x" + side) == *shape ? side + "x" + side : shape->name()) << '\n';
  }
  out << "k=" << k << '\n' << "seed=" << seed << '\n';
  for (const auto& [key, value] : search_overrides) out << key << '=' << value << '\n';
  return out.str();
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig rc;
  int line_no = 0;
  SearchConfig probe;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "shape") {
        rc.shape = parse_shape(value);
      } else if (key == "k") {
        rc.k = parse_number<int>(key, value);
        if (rc.k < 1) throw ConfigError("k must be >= 1");
      } else if (key == "seed") {
        rc.seed = parse_number<std::uint64_t>(key, value);
      } else {
        apply_setting(probe, key, value);  // rejects unknown keys early
        rc.search_overrides[key] = value;
      }
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace critset
