#include <algorithm>

#include "doctest.h"
#include "pathfreq/generator.hpp"

using namespace pathfreq;

TEST_CASE("generation is deterministic per seed") {
  ColoredTree a = generate_tree(100, TreeShape::Path, 10, true, 7);
  ColoredTree b = generate_tree(100, TreeShape::Path, 10, true, 7);
  CHECK(format_tree(a) == format_tree(b));
  ColoredTree c = generate_tree(100, TreeShape::Path, 10, true, 8);
  CHECK(format_tree(a) != format_tree(c));
}

TEST_CASE("shapes have the advertised structure") {
  ColoredTree path = generate_tree(50, TreeShape::Path, 3, false, 1);
  for (int v = 2; v <= 50; ++v) CHECK(path.parent[v] == v - 1);

  ColoredTree star = generate_tree(50, TreeShape::Star, 3, false, 1);
  for (int v = 2; v <= 50; ++v) CHECK(star.parent[v] == 1);

  ColoredTree cat = generate_tree(50, TreeShape::Caterpillar, 3, false, 1);
  TreeIndex ix = build_index(cat.structure());
  int max_depth = 0;
  for (int v = 1; v <= 50; ++v) max_depth = std::max(max_depth, ix.depth[v]);
  CHECK(max_depth >= 20);  // long spine
}

TEST_CASE("color counts and parse round-trip") {
  ColoredTree t = generate_tree(1000, TreeShape::Random, 10, false, 1);
  CHECK(t.num_colors <= 10);
  ColoredTree back = parse_tree(format_tree(t));
  CHECK(back.n == t.n);
  CHECK(back.color == t.color);

  ColoredTree one = generate_tree(1, TreeShape::Random, 5, false, 3);
  CHECK(one.n == 1);
  CHECK(one.num_colors == 1);
}
