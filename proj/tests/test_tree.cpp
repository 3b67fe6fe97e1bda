#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "pathfreq/tree.hpp"

using namespace pathfreq;

TEST_CASE("parse_tree reads the 7-node fixture") {
  ColoredTree t = testfix::t7();
  CHECK(t.n == 7);
  CHECK(t.parent == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3});
  CHECK(t.num_colors == 3);
  CHECK(t.color[1] == 1);
  CHECK(t.color[5] == 3);
  CHECK(t.has_weights);
  CHECK(t.weight[5] == 7);
}

TEST_CASE("parse_tree handles a single node") {
  ColoredTree t = parse_tree("1\n\n1\n");
  CHECK(t.n == 1);
  CHECK(t.num_colors == 1);
  CHECK_FALSE(t.has_weights);
}

TEST_CASE("parse_tree normalizes colors and keeps the remap") {
  ColoredTree t = parse_tree("3\n1 1\n50 7 50\n");
  CHECK(t.num_colors == 2);
  CHECK(t.color[1] == 2);  // 50 ranks above 7
  CHECK(t.color[2] == 1);
  CHECK(t.color_remap[1] == 7);
  CHECK(t.color_remap[2] == 50);
}

TEST_CASE("parse_tree rejects cycles and bad indices") {
  CHECK_THROWS_AS(parse_tree("3\n3 3\n1 1 1\n"), FormatError);  // self/forward cycle
  CHECK_THROWS_AS(parse_tree("3\n1\n1 1 1\n"), FormatError);    // short parent line
  CHECK_THROWS_AS(parse_tree("2\n9\n1 1\n"), FormatError);      // out of range
}

TEST_CASE("format_tree round-trips") {
  ColoredTree t = testfix::t7();
  ColoredTree u = parse_tree(format_tree(t));
  CHECK(u.parent == t.parent);
  CHECK(u.color == t.color);
  CHECK(u.weight == t.weight);
  CHECK(u.color_remap == t.color_remap);
}

TEST_CASE("tree index depth, sizes, lca, level ancestor") {
  ColoredTree t = testfix::t7();
  TreeIndex ix = build_index(t.structure());
  CHECK(ix.depth[1] == 0);
  CHECK(ix.depth[4] == 2);
  CHECK(ix.subtree[1] == 7);
  CHECK(ix.subtree[2] == 3);
  CHECK(ix.subtree[3] == 3);
  CHECK(ix.lca(4, 6) == 1);
  CHECK(ix.lca(4, 5) == 2);
  CHECK(ix.lca(4, 4) == 4);
  CHECK(ix.level_ancestor(6, 0) == 6);
  CHECK(ix.level_ancestor(6, 1) == 3);
  CHECK(ix.level_ancestor(6, 2) == 1);
  CHECK(ix.dist(4, 6) == 4);
  CHECK(ix.kth_on_path(4, 6, 0) == 4);
  CHECK(ix.kth_on_path(4, 6, 2) == 1);
  CHECK(ix.kth_on_path(4, 6, 4) == 6);
  CHECK_THROWS_AS(ix.check_node(0), QueryError);
  CHECK_THROWS_AS(ix.check_node(8), QueryError);
}
