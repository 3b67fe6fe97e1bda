#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "pathfreq/engine.hpp"
#include "pathfreq/generator.hpp"
#include "pathfreq/oracle.hpp"

using namespace pathfreq;

TEST_CASE("fixture goldens through the engine") {
  Engine e(testfix::t7());
  auto mode = e.query_mode(4, 6);
  CHECK(mode.color == 1);
  CHECK(mode.value == 3);
  auto lfe = e.query_least_frequent(4, 6);
  CHECK(lfe.color == 2);
  CHECK(lfe.value == 2);
  auto sum = e.query_max_sum(4, 6);
  CHECK(sum.color == 1);
  CHECK(sum.value == 10);
  // single-node path
  auto self = e.query_mode(5, 5);
  CHECK(self.color == 3);
  CHECK(self.value == 1);
}

TEST_CASE("max-sum requires weights") {
  Engine e(parse_tree("2\n1\n1 2\n"));
  CHECK_THROWS_AS(e.query_max_sum(1, 2), QueryError);
}

TEST_CASE("engine equals oracle across shapes, factors, and modes") {
  SplitMix64 rng(2024);
  for (int n : {1, 2, 7, 60, 300}) {
    for (auto shape :
         {TreeShape::Random, TreeShape::Path, TreeShape::Star, TreeShape::Caterpillar}) {
      ColoredTree t = generate_tree(n, shape, 5, true, rng.next());
      oracle::Oracle orc(t);
      for (bool fallback : {false, true}) {
        EngineOptions opt;
        opt.fallback = fallback;
        ColoredTree copy = t;
        Engine e(std::move(copy), opt);
        for (int q = 0; q < 40; ++q) {
          int i = 1 + static_cast<int>(rng.below(n));
          int j = 1 + static_cast<int>(rng.below(n));
          for (int k = 0; k < 3; ++k) {
            auto r = e.query_max_gvalue(i, j, static_cast<GKind>(k));
            auto o = orc.gmax(i, j, static_cast<oracle::GKind>(k));
            std::int64_t got = k == 1 ? -r.value : r.value;
            INFO("n=" << n << " i=" << i << " j=" << j << " k=" << k
                      << " fallback=" << fallback);
            CHECK(got == o.value);
          }
        }
      }
    }
  }
}

TEST_CASE("color decomposition is disjoint and complete") {
  SplitMix64 rng(99);
  for (int n : {7, 150}) {
    ColoredTree t = generate_tree(n, TreeShape::Random, 6, false, rng.next());
    Engine e(std::move(t), {});
    oracle::Oracle orc(e.tree());  // the engine owns the tree now
    for (int q = 0; q < 100; ++q) {
      int i = 1 + static_cast<int>(rng.below(n));
      int j = 1 + static_cast<int>(rng.below(n));
      auto classes = e.decompose_colors(i, j);
      std::vector<int> all;
      for (int k = 1; k <= 10; ++k)
        all.insert(all.end(), classes[k].begin(), classes[k].end());
      std::vector<int> sorted = all;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      std::vector<int> want;
      auto view = orc.view(i, j);
      for (auto& [c, f] : view.freq)
        if (f > 0) want.push_back(c);
      CHECK(sorted == want);
    }
  }
}

TEST_CASE("candidate set sizes stay within the documented budgets") {
  SplitMix64 rng(123);
  for (int n : {200, 1000}) {
    ColoredTree t = generate_tree(n, TreeShape::Random, n, false, rng.next());
    Engine e(std::move(t), {});
    std::int64_t t1 = e.hierarchy().t[1], t2 = e.hierarchy().t[2];
    for (int q = 0; q < 200; ++q) {
      int i = 1 + static_cast<int>(rng.below(n));
      int j = 1 + static_cast<int>(rng.below(n));
      CandidateSets cs = e.run_subtasks(i, j, GKind::Mode);
      CHECK(static_cast<std::int64_t>(cs.s1.size()) <= 12 * t1 + 16);
      CHECK(static_cast<std::int64_t>(cs.s2.size()) <= 8 * t2 + 16);
    }
  }
}

TEST_CASE("table dimensions follow the block counts") {
  SplitMix64 rng(31337);
  ColoredTree t = generate_tree(800, TreeShape::Random, 12, false, rng.next());
  Engine e(std::move(t), {});
  e.ensure_tables(GKind::Mode);
  EngineStats s = e.stats();
  const SubtaskTables& T = e.tables(GKind::Mode);
  CHECK(T.t1.size() == static_cast<std::size_t>(s.nb3) * s.nb3);
  CHECK(T.t2.size() == static_cast<std::size_t>(s.nb2) * s.nb3);
  CHECK(T.t3.size() == static_cast<std::size_t>(s.nb1) * s.nb3);
  CHECK(s.t5_bits <= s.t5_bit_budget);
}
