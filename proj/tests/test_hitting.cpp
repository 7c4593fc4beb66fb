#include <gtest/gtest.h>

#include <random>

#include "critset/hitting.hpp"
#include "hitting_instances.hpp"
#include "oracles.hpp"

using namespace critset;

namespace {

CellMask mask(std::initializer_list<int> cells) {
  CellMask m;
  for (int c : cells) m.set(c);
  return m;
}

HittingInstance worked_instance() {
  HittingInstance inst;
  inst.universe_size = 81;
  inst.k = 2;
  inst.families[1] = {mask({0, 3, 9, 12}), mask({0, 1, 27, 28}), mask({3, 4, 66, 67})};
  return inst;
}

std::vector<CellMask> run(const HittingInstance& inst, const EngineConfig& cfg) {
  std::vector<CellMask> out;
  enumerate_hitting_sets(inst, cfg, [&](const CellMask& m) { out.push_back(m); });
  return out;
}

}  // namespace

TEST(HitTable, MembershipRows) {
  auto inst = worked_instance();
  auto tables = init_hitting_vectors(inst);
  const HitTable& t = tables.at(1);
  EXPECT_EQ(t.bits, 3u);
  EXPECT_TRUE(t.test(0, 0));
  EXPECT_TRUE(t.test(0, 1));
  EXPECT_FALSE(t.test(0, 2));
  EXPECT_TRUE(t.test(3, 0));
  EXPECT_FALSE(t.test(3, 1));
  EXPECT_TRUE(t.test(3, 2));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_FALSE(t.test(80, i));
}

TEST(Con8, WorkedExample) {
  // Slot 1 is the least significant bit.
  auto bits = [](std::initializer_list<int> v) {
    std::uint8_t out = 0;
    int i = 0;
    for (int b : v) out = static_cast<std::uint8_t>(out | (b << i++));
    return out;
  };
  EXPECT_EQ(con8(bits({0, 1, 1, 0, 1, 0, 1, 0}), bits({1, 1, 0, 1, 0, 0, 1, 0})), bits({1, 1, 0, 0, 0, 0, 0, 0}));
}

TEST(Con8, TableMatchesReference) {
  for (unsigned m = 0; m < 256; ++m)
    for (unsigned b = 0; b < 256; ++b) {
      auto mm = static_cast<std::uint8_t>(m), bb = static_cast<std::uint8_t>(b);
      ASSERT_EQ(con8(mm, bb), con8_reference(mm, bb));
      EXPECT_EQ(std::popcount(static_cast<unsigned>(con8(mm, bb))),
                std::popcount(static_cast<unsigned>(bb & static_cast<std::uint8_t>(~mm))));
    }
  for (unsigned b = 0; b < 256; ++b) {
    EXPECT_EQ(con8(0, static_cast<std::uint8_t>(b)), b);
    EXPECT_EQ(con8(0xff, static_cast<std::uint8_t>(b)), 0);
  }
}

TEST(Consolidate, KeepsUnhitSlotsInOrder) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const int universe = 20;
    const std::size_t m = 1 + rng() % 300;
    std::vector<CellMask> sets(m);
    for (auto& s : sets)
      for (int i = 0; i < 4; ++i) s.set(static_cast<int>(rng() % universe));
    HitTable table = make_hit_table(universe, sets);
    std::vector<std::uint64_t> state(table.words);
    for (auto& w : state) w = rng() & rng();
    const std::size_t cap = 1 + rng() % 200;
    Consolidated c = consolidate(state, table, cap);
    std::vector<std::uint32_t> unhit;
    for (std::size_t i = 0; i < m; ++i)
      if (!((state[i >> 6] >> (i & 63)) & 1u)) unhit.push_back(static_cast<std::uint32_t>(i));
    EXPECT_EQ(c.unhit, unhit.size());
    unhit.resize(std::min(unhit.size(), cap));
    EXPECT_EQ(c.index_map, unhit);
    EXPECT_EQ(c.table.bits, unhit.size());
    for (int cell = 0; cell < universe; ++cell)
      for (std::size_t j = 0; j < c.table.bits; ++j)
        ASSERT_EQ(c.table.test(cell, j), table.test(cell, unhit[j]));
  }
}

TEST(Consolidate, EdgeCases) {
  std::vector<CellMask> sets{mask({0, 1}), mask({1, 2}), mask({2, 3})};
  HitTable table = make_hit_table(4, sets);
  std::vector<std::uint64_t> all_hit{0b111};
  EXPECT_EQ(consolidate(all_hit, table, 10).table.bits, 0u);
  std::vector<std::uint64_t> none_hit{0};
  auto c = consolidate(none_hit, table, 10);
  EXPECT_EQ(c.index_map, (std::vector<std::uint32_t>{0, 1, 2}));
}

TEST(Selection, EffectiveSize) {
  EXPECT_EQ(effective_size(mask({0, 3, 9, 12}), CellMask{}), 4);
  EXPECT_EQ(effective_size(mask({0, 3, 9, 12}), mask({3, 9})), 2);
}

TEST(Selection, Schedules) {
  std::vector<CellMask> sets{mask({0, 1, 2, 3}), mask({4, 5}), mask({6, 7, 8}), mask({9})};
  std::vector<std::uint64_t> state{0};
  auto first = SelectionSchedule::first_unhit();
  auto sel = select_set(0, sets, state, CellMask{}, first, true);
  EXPECT_EQ(sel.kind, Selection::Kind::kChosen);
  EXPECT_EQ(sel.index, 0u);
  auto full = SelectionSchedule::for_k(16);
  EXPECT_EQ(select_set(0, sets, state, CellMask{}, full, true).index, 3u);
  // With set 3 hit, the smallest remaining is set 1.
  state[0] = 0b1000;
  EXPECT_EQ(select_set(0, sets, state, CellMask{}, full, true).index, 1u);
  // Dead cells shrink set 2 below set 1; ties go to the lower index.
  EXPECT_EQ(select_set(0, sets, state, mask({6, 7}), full, true).index, 2u);
  EXPECT_EQ(select_set(0, sets, state, mask({6}), full, true).index, 1u);
  // Bounded scan: only the first unhit_count unhit sets are looked at.
  state[0] = 0;
  EXPECT_EQ(select_set(11, sets, state, CellMask{}, full, true).index, 3u);
  full.unhit_count = 2;
  EXPECT_EQ(select_set(11, sets, state, CellMask{}, full, true).index, 1u);
  // Past the scans, the first unhit set is taken.
  EXPECT_EQ(select_set(12, sets, state, CellMask{}, full, true).index, 0u);
  // Fully dead set is a cut.
  auto cut = select_set(0, sets, state, mask({9}), full, true);
  EXPECT_EQ(cut.kind, Selection::Kind::kCut);
  state[0] = 0b1111;
  EXPECT_EQ(select_set(0, sets, state, CellMask{}, full, true).kind, Selection::Kind::kAllHit);
}

TEST(Engine, WorkedInstance) {
  auto inst = worked_instance();
  std::vector<CellMask> want{mask({0, 3}), mask({0, 4}), mask({0, 66}), mask({0, 67}),
                             mask({1, 3}), mask({3, 27}), mask({3, 28})};
  EXPECT_EQ(brute_force_hitting_sets(inst), want);
  auto got = run(inst, EngineConfig::defaults_for(2));
  std::sort(got.begin(), got.end(), index_order_less);
  EXPECT_EQ(got, want);
}

TEST(Engine, TrivialInstances) {
  HittingInstance empty;
  empty.universe_size = 5;
  empty.k = 2;
  EXPECT_EQ(run(empty, EngineConfig::defaults_for(2)).size(), 10u);
  HittingInstance single;
  single.universe_size = 5;
  single.k = 1;
  single.families[1] = {mask({0})};
  auto got = run(single, EngineConfig::defaults_for(1));
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], mask({0}));
  HittingInstance with_empty = single;
  with_empty.families[1].push_back(CellMask{});
  EXPECT_TRUE(run(with_empty, EngineConfig::defaults_for(1)).empty());
  EXPECT_TRUE(brute_force_hitting_sets(with_empty).empty());
  HittingInstance full;
  full.universe_size = 6;
  full.k = 6;
  full.families[1] = {mask({1, 2}), mask({5})};
  EXPECT_EQ(brute_force_hitting_sets(full), std::vector<CellMask>{CellMask::low_bits(6)});
}

TEST(Engine, InvalidInput) {
  auto inst = worked_instance();
  inst.k = 0;
  EXPECT_THROW(run(inst, EngineConfig{}), std::invalid_argument);
  inst = worked_instance();
  inst.families[1].push_back(mask({90}));
  EXPECT_THROW(run(inst, EngineConfig{}), std::invalid_argument);
  inst = worked_instance();
  EngineConfig cfg;
  cfg.consolidation[1] = {2, 10};
  EXPECT_THROW(run(inst, cfg), std::invalid_argument);
  cfg.consolidation[1] = {1, 0};
  EXPECT_THROW(run(inst, cfg), std::invalid_argument);
  HittingInstance big;
  big.universe_size = 81;
  big.k = 16;
  EXPECT_THROW(brute_force_hitting_sets(big), BudgetExceeded);
}

TEST(Engine, OracleEquivalenceAllFlagCombinations) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    HittingInstance inst = testing_support::random_instance(rng, 24, 5, 20);
    auto want = oracle::hitting_sets(inst.universe_size, inst.k, inst.degree_one());
    for (int flags = 0; flags < 16; ++flags) {
      EngineConfig cfg = testing_support::config_with_flags(inst.k, flags, rng);
      auto got = run(inst, cfg);
      auto got_set = oracle::as_set(got);
      EXPECT_EQ(got_set.size(), got.size()) << "duplicate emission, flags " << flags;
      EXPECT_EQ(got_set, want) << "flags " << flags;
    }
  }
}

TEST(Engine, PruningAloneChangesNothing) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    HittingInstance inst = testing_support::random_instance(rng, 30, 5, 25);
    EngineConfig base = EngineConfig::baseline();
    EngineConfig pruned = base;
    pruned.enable_degree_pruning = true;
    auto a = run(inst, base);
    auto b = run(inst, pruned);
    EXPECT_EQ(oracle::as_set(a), oracle::as_set(b));
    EXPECT_EQ(a.size(), b.size());
  }
}

TEST(Engine, DeterministicOrder) {
  std::mt19937_64 rng(4);
  HittingInstance inst = testing_support::random_instance(rng, 30, 5, 25);
  auto cfg = EngineConfig::defaults_for(inst.k);
  EXPECT_EQ(run(inst, cfg), run(inst, cfg));
}

TEST(Engine, CheckLevels) {
  EngineConfig cfg;
  EXPECT_EQ(cfg.check_level(4, 16), 13);
  EXPECT_EQ(cfg.check_level(2, 16), 15);
  cfg.pruning_levels[4] = 12;
  EXPECT_EQ(cfg.check_level(4, 16), 12);
}

TEST(Engine, DefaultsForSixteen) {
  auto cfg = EngineConfig::defaults_for(16);
  EXPECT_EQ(cfg.consolidation.at(1).trigger_level, 7);
  EXPECT_EQ(cfg.consolidation.at(1).cap, 128u);
  EXPECT_EQ(cfg.consolidation.at(4).trigger_level, 5);
  EXPECT_EQ(cfg.consolidation.at(4).cap, 1536u);
  EXPECT_EQ(cfg.selection.full_scan_until, 10);
  EXPECT_EQ(cfg.selection.window_level, 10);
  EXPECT_EQ(cfg.selection.window, 64u);
  EXPECT_EQ(cfg.selection.unhit_level, 11);
  EXPECT_EQ(cfg.selection.unhit_count, 5u);
}

TEST(Instance, ParseFormatRoundTrip) {
  auto inst = worked_instance();
  inst.families[2] = {mask({0, 1, 27, 28, 3, 4, 66, 67})};
  auto text = format_instance(inst);
  auto back = parse_instance(text);
  EXPECT_EQ(back.universe_size, 81);
  EXPECT_EQ(back.k, 2);
  EXPECT_EQ(back.families, inst.families);
  EXPECT_THROW(parse_instance("81\n"), std::invalid_argument);
  EXPECT_THROW(parse_instance("81 2\n1: 0,x\n"), std::invalid_argument);
  EXPECT_THROW(parse_instance("10 2\n1: 0,11\n"), std::invalid_argument);
}
