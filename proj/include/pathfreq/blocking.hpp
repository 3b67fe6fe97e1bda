#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pathfreq/tree.hpp"

namespace pathfreq {

// Marked node set for a blocking factor t.  Construction (compute_marked):
//   Rule 1: mark u when subtree(u) >= t and every child subtree < t.
//   Rule 2: close under LCA (auxiliary-tree construction over the marks).
//   Rule 3: treat the vertical unmarked segments between consecutive marks
//           (and above the topmost mark) as weighted intervals; while some
//           segment has weight subtree(v) - subtree(u) >= t, mark the lowest
//           such v (max-heap order over segments).
// Afterwards every unmarked connected component has <= t nodes and
// |members| <= 4 * ceil(n / t).
struct MarkedSet {
  std::int64_t t = 1;
  std::vector<int> members;    // ascending node ids
  std::vector<char> is_marked; // size n+1
};

MarkedSet compute_marked(const std::vector<int>& parent, const TreeIndex& ix,
                         std::int64_t t);

// Auxiliary tree of a closed (or arbitrary) vertex set: vertices = S plus the
// LCAs of tin-adjacent pairs; parent = nearest proper ancestor inside the set.
struct AuxTree {
  std::vector<int> verts;   // ascending tin order
  std::vector<int> parent;  // parent[k] = node id, 0 for the root
};

AuxTree build_aux_tree(const TreeIndex& ix, std::vector<int> verts);

// Partition of all nodes into blocks around a marked set:
//   - internal block of marked u: {u} plus the unmarked component adjacent to
//     u through its parent edge (just {u} when the parent is marked/absent);
//   - unclaimed unmarked components hang below some marked anchor w and are
//     packed whole into leaf bins of total size <= 2t (rep = w, which lies
//     outside the bin).
// Every block is connected once its representative is included; block size
// is <= 2t; block count <= 2|members| + ceil(n/t) + 1.
struct BlockPartition {
  std::vector<int> block_of;             // size n+1
  std::vector<std::vector<int>> blocks;  // ascending node ids
  std::vector<int> rep;                  // representative (in the marked set)
  std::vector<char> kind;                // 0 internal, 1 leaf bin
  int count() const { return static_cast<int>(blocks.size()); }
};

BlockPartition compute_partition(const std::vector<int>& parent, const TreeIndex& ix,
                                 const MarkedSet& ms);

// One level of the hierarchy, always expressed in original node ids.
struct Level {
  std::int64_t factor = 1;
  std::vector<int> members;
  std::vector<char> is_marked;
  BlockPartition part;
  // compressed tree over the members (edge = no intermediate marked node)
  std::shared_ptr<SimpleTree> ctree;
  std::vector<int> clabel;   // ctree id -> original id
  std::vector<int> cindex;   // original id -> ctree id (0 when unmarked)
  std::shared_ptr<TreeIndex> cix;
  std::vector<std::vector<int>> block_colors;  // sorted distinct colors per block
};

// Block trees for a consecutive level pair: per high-level block, the tree of
// its constituent low-level blocks (parent = block of the parent node of the
// sub-block's topmost member).
struct BlockTreeSet {
  std::vector<std::vector<int>> subs;    // high block -> low block ids
  std::vector<std::vector<int>> parent;  // parallel: index into subs, -1 root
  std::vector<int> high_of;              // low block -> high block
  std::vector<int> rel_of;               // low block -> index within subs
};

BlockTreeSet build_block_trees(const Level& low, const Level& high);

// Four-level hierarchy t1 <= t2 <= t3 <= t4 (factors capped at n) plus the
// stratification chain of intermediate factors between t2 and t3.  Higher
// levels are built recursively on the compressed tree of the previous level,
// which makes all partitions nested and all marked sets subsets.
struct BlockHierarchy {
  const ColoredTree* tree = nullptr;
  const TreeIndex* ix = nullptr;
  std::int64_t t[5] = {0, 1, 1, 1, 1};
  int L = 2, LL = 1;
  bool degenerate = false;  // t1 >= n: single-block regime
  std::shared_ptr<Level> level[5];                 // 1..4 used
  std::vector<std::shared_ptr<Level>> strat;       // factors descending: t3 ... t2
  BlockTreeSet btree[4];                           // index k: pair (k, k+1), k=1..3

  int block_of(int u, int k) const { return level[k]->part.block_of[u]; }
  int representative(int b, int k) const { return level[k]->part.rep[b]; }
};

// L = max(2, ceil(log2 n)), LL = max(1, ceil(log2 L)),
// t2 = t1*LL, t3 = t2*ceil(sqrt(L)), t4 = t3*ceil(sqrt(L)), all capped at n.
BlockHierarchy compute_hierarchy(const ColoredTree& tree, const TreeIndex& ix,
                                 std::int64_t t1);

std::int64_t default_t1(int n, int word_size);

// ---- checkers (used by tests; return empty string or a failure message) ----
std::string check_marked_set(const std::vector<int>& parent, const TreeIndex& ix,
                             const MarkedSet& ms);
std::string check_partition(const std::vector<int>& parent, const TreeIndex& ix,
                            const MarkedSet& ms, const BlockPartition& part);
std::string check_hierarchy(const BlockHierarchy& h);

}  // namespace pathfreq
