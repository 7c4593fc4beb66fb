#include <gtest/gtest.h>

#include "critset/config.hpp"

using namespace critset;

TEST(Config, TextRoundTrip) {
  for (auto s : {GridShape::s4x4(), GridShape::s6x6(), GridShape::s9x9()})
    for (int k : {4, 8, 16}) {
      auto cfg = SearchConfig::defaults_for(s, k);
      cfg.clique_caps[3] = 77;
      cfg.clique_starts[2] = 5;
      cfg.engine.pruning_levels[2] = k - 1;
      auto text = cfg.to_text();
      SearchConfig back;
      back.engine.consolidation.clear();
      auto rc = parse_run_config(text);
      for (const auto& [key, value] : rc.search_overrides) apply_setting(back, key, value);
      EXPECT_EQ(back.to_text(), text);
    }
}

TEST(Config, RunConfigParsing) {
  auto rc = parse_run_config(
      "# comment\n"
      "shape = 6x6\n"
      "k=7\n"
      "seed=42\n"
      "degree_one_cap=100\n"
      "engine.consolidation=false\n"
      "consolidate.2=off\n"
      "degree_one_cap=120\n");
  ASSERT_TRUE(rc.shape);
  EXPECT_EQ(*rc.shape, GridShape::s6x6());
  EXPECT_EQ(rc.k, 7);
  EXPECT_EQ(rc.seed, 42u);
  auto cfg = rc.search_config(*rc.shape);
  EXPECT_EQ(cfg.degree_one_cap, 120u);
  EXPECT_FALSE(cfg.engine.enable_consolidation);
  EXPECT_EQ(cfg.engine.consolidation.count(2), 0u);
  EXPECT_EQ(parse_run_config(rc.to_text()).to_text(), rc.to_text());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_run_config("bogus=1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("k=0\n"), ConfigError);
  EXPECT_THROW(parse_run_config("k=abc\n"), ConfigError);
  EXPECT_THROW(parse_run_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_run_config("verify_sets=maybe\n"), ConfigError);
  EXPECT_THROW(parse_run_config("consolidate.2=5\n"), ConfigError);
  EXPECT_THROW(parse_run_config("clique_cap.99=5\n"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/critset.conf"), ConfigError);
  // Values that parse but fail validation surface from search_config.
  auto rc = parse_run_config("k=16\nconsolidate.1=20:10\n");
  EXPECT_THROW(rc.search_config(GridShape::s9x9()), ConfigError);
}
