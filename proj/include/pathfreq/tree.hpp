#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathfreq/util.hpp"

namespace pathfreq {

// Rooted tree given by a parent array.  Nodes are 1-based; node 1 is the root.
// Used both for the input tree and for the compressed trees produced by the
// blocking recursion.
struct SimpleTree {
  int n = 0;
  std::vector<int> parent;  // size n+1, parent[1] == 0

  SimpleTree() = default;
  explicit SimpleTree(int n_) : n(n_), parent(n_ + 1, 0) {}
};

// Node-colored (optionally node-weighted) input tree.  Colors are normalized
// to 1..num_colors by sorted rank; color_remap[k] recovers the original label.
struct ColoredTree {
  int n = 0;
  std::vector<int> parent;          // size n+1
  std::vector<int> color;           // size n+1, normalized 1..num_colors
  std::vector<std::int64_t> weight; // size n+1 (empty semantics when !has_weights)
  bool has_weights = false;
  int num_colors = 0;
  std::vector<std::int64_t> color_remap;  // size num_colors+1

  SimpleTree structure() const {
    SimpleTree t(n);
    t.parent = parent;
    return t;
  }
};

// Parses the on-disk format:
//   line 1: n
//   line 2: parents of nodes 2..n (empty line when n == 1)
//   line 3: colors of nodes 1..n
//   line 4 (optional): signed weights of nodes 1..n
// Throws FormatError on any malformed input (non-tree parent arrays included).
ColoredTree parse_tree(const std::string& text);

std::string format_tree(const ColoredTree& t);  // inverse of parse_tree

// Static index over a SimpleTree: preorder, depth, subtree size, Euler
// intervals, O(1) LCA via Euler tour + sparse-table RMQ, and level ancestors
// via binary lifting.
struct TreeIndex {
  int n = 0;
  const SimpleTree* tree = nullptr;
  std::vector<int> depth;      // size n+1, depth[root] = 0
  std::vector<int> subtree;    // size n+1, subtree size
  std::vector<int> tin, tout;  // Euler interval: [tin, tout), tin is preorder rank
  std::vector<int> preorder;   // preorder[k] = node with tin == k
  // children in CSR form (preorder of input order)
  std::vector<int> child_off, child_dat;

  int lca(int u, int v) const;
  // k-th ancestor of u (0 = u itself); k must be <= depth[u].
  int level_ancestor(int u, int k) const;
  bool is_ancestor(int a, int d) const {  // a ancestor-or-self of d
    return tin[a] <= tin[d] && tout[d] <= tout[a];
  }
  int dist(int u, int v) const { return depth[u] + depth[v] - 2 * depth[lca(u, v)]; }
  // d-th node (0-based) on the path from i to j; d <= dist(i, j).
  int kth_on_path(int i, int j, int d) const;
  void check_node(int u) const {
    if (u < 1 || u > n) throw QueryError("node index out of range: " + std::to_string(u));
  }

 private:
  // Euler tour RMQ (tour of nodes, min by depth) for O(1) LCA.
  std::vector<int> tour_pos;               // first tour position per node
  std::vector<int> tour;                   // size 2n-1
  std::vector<std::vector<int>> sparse;    // sparse[k][i] = argmin-depth over tour[i, i+2^k)
  std::vector<std::vector<int>> up;        // binary lifting table
  friend TreeIndex build_index(const SimpleTree& t);
};

// Builds the index; the SimpleTree must outlive the TreeIndex.
TreeIndex build_index(const SimpleTree& t);

}  // namespace pathfreq
