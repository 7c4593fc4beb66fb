#pragma once

// Flat key=value run configuration, one key per line, '#' comments.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "critset/checker.hpp"
#include "critset/grid.hpp"

namespace critset {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sets one SearchConfig key (as written by SearchConfig::to_text).
/// Throws ConfigError on an unknown key or a bad value.
void apply_setting(SearchConfig& config, const std::string& key, const std::string& value);

struct RunConfig {
  std::optional<GridShape> shape;
  int k = 16;
  std::uint64_t seed = 1;
  /// Search keys as given in the file (last assignment wins).
  std::map<std::string, std::string> search_overrides;

  /// Defaults for the shape and k, then the overrides; validated.
  [[nodiscard]] SearchConfig search_config(const GridShape& shape) const;
  [[nodiscard]] std::string to_text() const;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

}  // namespace critset
