#include "pathfreq/virtual_forest.hpp"

#include <algorithm>
#include <cassert>

namespace pathfreq {

VirtualForest build_virtual_forest(const ColoredTree& t, const TreeIndex& ix) {
  VirtualForest vf;
  vf.tree = &t;
  vf.ix = &ix;
  const int n = t.n;
  vf.vparent.assign(n + 1, 0);
  vf.vdepth.assign(n + 1, 0);

  // one DFS with a stack per color: on entry the stack top is the nearest
  // proper same-colored ancestor
  std::vector<std::vector<int>> stacks(t.num_colors + 1);
  std::vector<std::pair<int, int>> st;  // (node, next child slot)
  st.emplace_back(1, ix.child_off[1]);
  vf.vparent[1] = 0;
  vf.vdepth[1] = 1;
  stacks[t.color[1]].push_back(1);
  while (!st.empty()) {
    auto& [u, slot] = st.back();
    if (slot < ix.child_off[u + 1]) {
      int c = ix.child_dat[slot++];
      auto& s = stacks[t.color[c]];
      vf.vparent[c] = s.empty() ? 0 : s.back();
      vf.vdepth[c] = s.empty() ? 1 : vf.vdepth[s.back()] + 1;
      s.push_back(c);
      st.emplace_back(c, ix.child_off[c]);
    } else {
      stacks[t.color[u]].pop_back();
      st.pop_back();
    }
  }

  if (t.has_weights) {
    vf.prefix_w.assign(n + 1, 0);
    for (int k = 0; k < n; ++k) {  // preorder: vparent precedes
      int u = ix.preorder[k];
      vf.prefix_w[u] = vf.prefix_w[vf.vparent[u]] + t.weight[u];
    }
  }

  // occurrence lists in tin order (preorder is tin order)
  vf.occ_off.assign(t.num_colors + 2, 0);
  for (int v = 1; v <= n; ++v) ++vf.occ_off[t.color[v] + 1];
  for (int c = 1; c <= t.num_colors + 1; ++c) vf.occ_off[c] += vf.occ_off[c - 1];
  vf.occ_dat.assign(n, 0);
  {
    std::vector<int> fill(vf.occ_off.begin(), vf.occ_off.end() - 1);
    for (int k = 0; k < n; ++k) {
      int u = ix.preorder[k];
      vf.occ_dat[fill[t.color[u]]++] = u;
    }
  }

  int lg = std::max(1, ceil_log2(static_cast<std::uint64_t>(n + 1)));
  vf.vup.assign(lg, std::vector<int>(n + 1, 0));
  vf.vup[0] = vf.vparent;
  for (int k = 1; k < lg; ++k)
    for (int v = 1; v <= n; ++v) vf.vup[k][v] = vf.vup[k - 1][vf.vup[k - 1][v]];
  return vf;
}

int VirtualForest::vlevel_ancestor(int u, int k) const {
  assert(k >= 0 && k <= vdepth[u]);
  for (int b = 0; k; ++b, k >>= 1)
    if (k & 1) u = vup[b][u];
  return u;
}

std::optional<int> VirtualForest::lowest_colored_ancestor(int u, int c) const {
  if (c < 1 || c > tree->num_colors) return std::nullopt;
  const int* beg = occ_dat.data() + occ_off[c];
  const int* end = occ_dat.data() + occ_off[c + 1];
  // last occurrence with tin <= tin[u]
  auto it = std::upper_bound(beg, end, ix->tin[u],
                             [&](int key, int v) { return key < ix->tin[v]; });
  if (it == beg) return std::nullopt;
  int p = *(it - 1);
  if (ix->is_ancestor(p, u)) return p;
  // every c-ancestor of u is a virtual ancestor of p: climb to the deepest
  // one whose Euler interval contains u
  for (int b = static_cast<int>(vup.size()) - 1; b >= 0; --b) {
    int q = vup[b][p];
    if (q != 0 && !ix->is_ancestor(q, u)) p = q;
  }
  int a = vparent[p];
  if (a == 0) return std::nullopt;
  assert(ix->is_ancestor(a, u));
  return a;
}

int VirtualForest::vlca(int u, int v) const {
  assert(tree->color[u] == tree->color[v]);
  int w = ix->lca(u, v);
  auto a = lowest_colored_ancestor(w, tree->color[u]);
  return a ? *a : 0;
}

std::optional<int> VirtualForest::colored_ancestor_at_least(int u, int c,
                                                            int min_depth) const {
  auto x = lowest_colored_ancestor(u, c);
  if (!x || ix->depth[*x] < min_depth) return std::nullopt;
  return x;
}

std::optional<std::pair<int, int>> VirtualForest::path_color_endpoints(int i, int j,
                                                                       int c) const {
  ix->check_node(i);
  ix->check_node(j);
  int w = ix->lca(i, j);
  int dw = ix->depth[w];
  auto xi = colored_ancestor_at_least(i, c, dw);
  auto xj = colored_ancestor_at_least(j, c, dw);
  if (!xi && !xj) return std::nullopt;

  // Highest c-node on the ascending chain from y (depth >= dw): the virtual
  // child of the deepest c-ancestor strictly above w, toward y.
  auto top_of_side = [&](int y) {
    auto anc = lowest_colored_ancestor(w, c);  // proper: color[w] != c here
    int steps = anc ? vdepth[y] - vdepth[*anc] - 1 : vdepth[y] - 1;
    return vlevel_ancestor(y, steps);
  };
  int l = xi ? *xi : top_of_side(*xj);
  int r = xj ? *xj : top_of_side(*xi);
  return std::make_pair(l, r);
}

int VirtualForest::freq_contracted(int l, int r) const {
  assert(tree->color[l] == tree->color[r]);
  int a = vlca(l, r);
  int w0 = ix->lca(l, r);
  bool on_path = (a != 0 && a == w0);
  return vdepth[l] + vdepth[r] - 2 * (a ? vdepth[a] : 0) + (on_path ? 1 : 0);
}

std::int64_t VirtualForest::sum_contracted(int l, int r) const {
  assert(tree->has_weights);
  int a = vlca(l, r);
  int w0 = ix->lca(l, r);
  bool on_path = (a != 0 && a == w0);
  return prefix_w[l] + prefix_w[r] - 2 * (a ? prefix_w[a] : 0) +
         (on_path ? tree->weight[a] : 0);
}

int VirtualForest::path_color_frequency(int i, int j, int c) const {
  auto ep = path_color_endpoints(i, j, c);
  if (!ep) return 0;
  return freq_contracted(ep->first, ep->second);
}

}  // namespace pathfreq
