#include <optional>

#include "doctest.h"
#include "fixtures.hpp"
#include "pathfreq/color_index.hpp"
#include "pathfreq/generator.hpp"
#include "pathfreq/oracle.hpp"
#include "pathfreq/static_dict.hpp"

using namespace pathfreq;

TEST_CASE("u64 dictionary stores and misses correctly") {
  SplitMix64 rng(5);
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> vals;
  for (int k = 0; k < 500; ++k) {
    keys.push_back(rng.next() | 1);
    vals.push_back(static_cast<std::uint32_t>(k));
  }
  U64Dict d;
  d.build(keys, vals, 123);
  for (int k = 0; k < 500; ++k) {
    CHECK(d.get(keys[k]) == static_cast<std::uint32_t>(k));
    CHECK(d.contains(keys[k]));
  }
  int false_hits = 0;
  for (int k = 0; k < 2000; ++k)
    if (d.contains(rng.next() | 2)) ++false_hits;  // distinct key space
  CHECK(false_hits == 0);
}

struct IndexedTree {
  ColoredTree t;
  TreeIndex ix;
  VirtualForest vf;
  BlockHierarchy h;
  ColorIndex ci;
  explicit IndexedTree(ColoredTree tree, std::int64_t t1 = 0)
      : t(std::move(tree)),
        ix(build_index(t.structure())),
        vf(build_virtual_forest(t, ix)),
        h(compute_hierarchy(t, ix, t1 > 0 ? t1 : default_t1(t.n, 64))),
        ci(build_color_index(t, ix, h, vf)) {}
};

TEST_CASE("topmost dict matches a direct block scan") {
  SplitMix64 rng(17);
  for (int n : {1, 7, 80, 350}) {
    IndexedTree x(generate_tree(n, TreeShape::Random, 4, false, rng.next()));
    for (int k = 1; k <= 4; ++k) {
      const Level& lv = *x.h.level[k];
      for (int b = 0; b < lv.part.count(); ++b) {
        for (int c = 1; c <= x.t.num_colors; ++c) {
          std::optional<int> want;
          for (int v : lv.part.blocks[b])
            if (x.t.color[v] == c && (!want || x.ix.depth[v] < x.ix.depth[*want]))
              want = v;
          CHECK(x.ci.contains_level(c, b, k) == want.has_value());
          if (want)
            CHECK(x.ci.topmost_node(c, b, x.ci.strat_index[k]) == want);
        }
      }
    }
  }
}

TEST_CASE("presence masks reconstruct block color sets") {
  SplitMix64 rng(29);
  IndexedTree x(generate_tree(300, TreeShape::Random, 5, false, rng.next()));
  for (int k = 1; k <= 3; ++k) {
    const Level& high = *x.h.level[k + 1];
    const BlockTreeSet& bt = x.h.btree[k];
    for (int hb = 0; hb < high.part.count(); ++hb) {
      for (int c = 1; c <= x.t.num_colors; ++c) {
        const SmallBitset* mask = x.ci.color_mask(k, c, hb);
        bool present = x.ci.contains_level(c, hb, k + 1);
        CHECK((mask != nullptr) == present);
        if (!mask) continue;
        for (std::size_t r = 0; r < bt.subs[hb].size(); ++r)
          CHECK(mask->test(r) == x.ci.contains_level(c, bt.subs[hb][r], k));
      }
    }
  }
}

TEST_CASE("first occurrence on path matches a naive walk") {
  SplitMix64 rng(31);
  int checked = 0;
  for (int n : {20, 120, 600}) {
    for (auto shape : {TreeShape::Random, TreeShape::Caterpillar}) {
      IndexedTree x(generate_tree(n, shape, 6, false, rng.next()));
      oracle::Oracle orc(x.t);
      for (int q = 0; q < 3000; ++q) {
        int i = 1 + static_cast<int>(rng.below(n));
        int j = 1 + static_cast<int>(rng.below(n));
        int c = 1 + static_cast<int>(rng.below(x.t.num_colors));
        for (int k = 2; k <= 4; ++k) {
          int bk = x.h.block_of(i, k), bk1 = x.h.block_of(i, k - 1);
          if (!x.ci.contains_level(c, bk, k) || x.ci.contains_level(c, bk1, k - 1))
            continue;  // precondition
          if (orc.frequency(i, j, c) == 0) continue;
          int got = x.ci.first_occurrence_on_path(i, j, k, c);
          int want = 0;
          for (int v : orc.path_nodes(i, j))
            if (x.t.color[v] == c) {
              want = v;
              break;
            }
          CHECK(got == want);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("first occurrence rejects precondition violations") {
  IndexedTree x(testfix::t7(), 1);
  // color of node i inside its own level-1 block violates the outer/inner rule
  bool threw = false;
  try {
    x.ci.first_occurrence_on_path(4, 6, 2, x.t.color[4]);
  } catch (const QueryError&) {
    threw = true;
  }
  CHECK(threw);
}
