#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pathfreq/tree.hpp"

namespace pathfreq {

// Per-color virtual trees: V_c contains the c-colored nodes; the virtual
// parent of u is the nearest proper ancestor of u with the same color, or the
// per-color sentinel root when none exists.  Built with one DFS over the input
// tree using per-color stacks; sum of |V_c| over all colors equals n.
//
// vparent[u] == 0 encodes "virtual root of color[u]".  vdepth[u] counts real
// nodes on the chain (virtual root has vdepth 0, so vdepth[u] >= 1).
struct VirtualForest {
  const ColoredTree* tree = nullptr;
  const TreeIndex* ix = nullptr;

  std::vector<int> vparent;            // size n+1
  std::vector<int> vdepth;             // size n+1
  std::vector<std::int64_t> prefix_w;  // chain weight sums (only if has_weights)
  // occurrences of each color sorted by Euler tin, CSR by color
  std::vector<int> occ_off;  // size num_colors+2
  std::vector<int> occ_dat;  // size n
  std::vector<std::vector<int>> vup;  // binary lifting over vparent

  int count(int c) const { return occ_off[c + 1] - occ_off[c]; }

  // k-th virtual ancestor of u inside V_color[u] (0 = u itself); returns 0
  // (the virtual root) when k == vdepth[u]; k must be <= vdepth[u].
  int vlevel_ancestor(int u, int k) const;

  // Deepest ancestor-or-self of u colored c; nullopt when none exists.
  std::optional<int> lowest_colored_ancestor(int u, int c) const;

  // Virtual LCA of two c-colored nodes u, v: the deepest c-colored common
  // ancestor, or 0 for the virtual root.  Derived as the lowest c-colored
  // ancestor-or-self of lca(u, v).
  int vlca(int u, int v) const;

  // Extremal occurrences of c on P(i, j): (nearest to i, nearest to j);
  // nullopt when c does not occur on the path.
  std::optional<std::pair<int, int>> path_color_endpoints(int i, int j, int c) const;

  // Frequency of c on the path between the contracted endpoints l, r (both
  // colored c, both extremal on some path).  O(1) modulo the vlca call.
  int freq_contracted(int l, int r) const;

  // Weight sum analogue (requires weights).
  std::int64_t sum_contracted(int l, int r) const;

  // Frequency of c on P(i, j) (0 when absent).
  int path_color_frequency(int i, int j, int c) const;

  // Deepest ancestor-or-self of u colored c with depth >= min_depth.
  std::optional<int> colored_ancestor_at_least(int u, int c, int min_depth) const;
};

VirtualForest build_virtual_forest(const ColoredTree& t, const TreeIndex& ix);

}  // namespace pathfreq
