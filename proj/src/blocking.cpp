#include "pathfreq/blocking.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <tuple>

namespace pathfreq {

namespace {

std::vector<int> sorted_by_tin(const TreeIndex& ix, std::vector<int> verts) {
  std::sort(verts.begin(), verts.end(),
            [&](int a, int b) { return ix.tin[a] < ix.tin[b]; });
  return verts;
}

}  // namespace

AuxTree build_aux_tree(const TreeIndex& ix, std::vector<int> verts) {
  AuxTree aux;
  if (verts.empty()) return aux;
  std::set<int> vs(verts.begin(), verts.end());
  std::vector<int> order = sorted_by_tin(ix, {vs.begin(), vs.end()});
  for (size_t k = 0; k + 1 < order.size(); ++k) vs.insert(ix.lca(order[k], order[k + 1]));
  aux.verts = sorted_by_tin(ix, {vs.begin(), vs.end()});
  aux.parent.assign(aux.verts.size(), 0);
  // monotone stack sweep: nearest in-set proper ancestor
  std::vector<int> stack;
  for (size_t k = 0; k < aux.verts.size(); ++k) {
    int u = aux.verts[k];
    while (!stack.empty() && !ix.is_ancestor(stack.back(), u)) stack.pop_back();
    aux.parent[k] = stack.empty() ? 0 : stack.back();
    stack.push_back(u);
  }
  return aux;
}

MarkedSet compute_marked(const std::vector<int>& parent, const TreeIndex& ix,
                         std::int64_t t) {
  const int n = ix.n;
  MarkedSet ms;
  ms.t = std::max<std::int64_t>(1, std::min<std::int64_t>(t, n));
  ms.is_marked.assign(n + 1, 0);
  const std::int64_t tt = ms.t;

  // Rule 1: subtree >= t, all child subtrees < t.
  for (int u = 1; u <= n; ++u) {
    if (ix.subtree[u] < tt) continue;
    bool ok = true;
    for (int k = ix.child_off[u]; k < ix.child_off[u + 1]; ++k)
      if (ix.subtree[ix.child_dat[k]] >= tt) { ok = false; break; }
    if (ok) ms.is_marked[u] = 1;
  }

  // Rule 2: LCA closure.
  {
    std::vector<int> cur;
    for (int u = 1; u <= n; ++u)
      if (ms.is_marked[u]) cur.push_back(u);
    AuxTree aux = build_aux_tree(ix, cur);
    for (int u : aux.verts) ms.is_marked[u] = 1;
  }

  // Rule 3: split heavy vertical segments.  A segment is the strictly-unmarked
  // chain above a marked node u up to (exclusive) the nearest marked proper
  // ancestor, or up to the root inclusive when none exists; its weight is
  // subtree(top interior node) - subtree(u).
  {
    std::vector<int> cur;
    for (int u = 1; u <= n; ++u)
      if (ms.is_marked[u]) cur.push_back(u);
    AuxTree aux = build_aux_tree(ix, cur);
    // weight, bottom node, kmax (interior chain length above bottom)
    using Seg = std::tuple<std::int64_t, int, int>;
    std::priority_queue<Seg> heap;
    auto push_seg = [&](int u, int kmax) {
      if (kmax < 1) return;
      std::int64_t w = ix.subtree[ix.level_ancestor(u, kmax)] - ix.subtree[u];
      if (w >= tt) heap.emplace(w, u, kmax);
    };
    for (size_t k = 0; k < aux.verts.size(); ++k) {
      int u = aux.verts[k], p = aux.parent[k];
      push_seg(u, p == 0 ? ix.depth[u] : ix.depth[u] - ix.depth[p] - 1);
    }
    while (!heap.empty()) {
      auto [w, u, kmax] = heap.top();
      heap.pop();
      (void)w;
      // lowest interior v with subtree(v) - subtree(u) >= t
      int lo = 1, hi = kmax;
      while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (ix.subtree[ix.level_ancestor(u, mid)] - ix.subtree[u] >= tt) hi = mid;
        else lo = mid + 1;
      }
      int v = ix.level_ancestor(u, lo);
      ms.is_marked[v] = 1;
      push_seg(v, kmax - lo);
    }
  }

  for (int u = 1; u <= n; ++u)
    if (ms.is_marked[u]) ms.members.push_back(u);
  (void)parent;
  return ms;
}

BlockPartition compute_partition(const std::vector<int>& parent, const TreeIndex& ix,
                                 const MarkedSet& ms) {
  const int n = ix.n;
  BlockPartition part;
  part.block_of.assign(n + 1, -1);

  // unmarked components (preorder: parent precedes child)
  std::vector<int> comp(n + 1, -1);
  std::vector<std::vector<int>> comp_nodes;
  for (int k = 0; k < n; ++k) {
    int u = ix.preorder[k];
    if (ms.is_marked[u]) continue;
    int p = parent[u];
    if (p != 0 && !ms.is_marked[p]) {
      comp[u] = comp[p];
    } else {
      comp[u] = static_cast<int>(comp_nodes.size());
      comp_nodes.emplace_back();
    }
    comp_nodes[comp[u]].push_back(u);
  }

  // internal blocks claim the component adjacent through the parent edge
  std::vector<int> claimant(comp_nodes.size(), 0);
  for (int u : ms.members) {
    int p = parent[u];
    if (p != 0 && !ms.is_marked[p]) {
      assert(claimant[comp[p]] == 0 && "component claimed twice");
      claimant[comp[p]] = u;
    }
  }
  auto add_block = [&](std::vector<int> nodes, int rep, char kind) {
    std::sort(nodes.begin(), nodes.end());
    int id = part.count();
    for (int v : nodes) part.block_of[v] = id;
    part.blocks.push_back(std::move(nodes));
    part.rep.push_back(rep);
    part.kind.push_back(kind);
  };
  for (int u : ms.members) {
    std::vector<int> nodes{u};
    int p = parent[u];
    if (p != 0 && !ms.is_marked[p]) {
      const auto& cn = comp_nodes[comp[p]];
      nodes.insert(nodes.end(), cn.begin(), cn.end());
    }
    add_block(std::move(nodes), u, 0);
  }

  // unclaimed components: group per anchor, pack greedily into bins <= 2t
  std::vector<std::vector<int>> by_anchor(n + 1);
  for (size_t c = 0; c < comp_nodes.size(); ++c) {
    if (claimant[c] != 0) continue;
    int top = comp_nodes[c].front();
    int w = parent[top];
    assert(w != 0 && ms.is_marked[w] && "unclaimed component must hang below a mark");
    by_anchor[w].push_back(static_cast<int>(c));
  }
  const std::int64_t cap = 2 * ms.t;
  for (int w = 1; w <= n; ++w) {
    if (by_anchor[w].empty()) continue;
    std::vector<int> bin;
    for (int c : by_anchor[w]) {
      const auto& cn = comp_nodes[c];
      if (!bin.empty() && static_cast<std::int64_t>(bin.size() + cn.size()) > cap) {
        add_block(std::move(bin), w, 1);
        bin.clear();
      }
      bin.insert(bin.end(), cn.begin(), cn.end());
    }
    if (!bin.empty()) add_block(std::move(bin), w, 1);
  }
  return part;
}

// Compressed tree over the marked nodes: parent = nearest marked proper
// ancestor, ids assigned in preorder (so id 1 is the topmost mark, which is
// an ancestor of every mark by LCA closure).
static void build_compressed_tree(const std::vector<int>& parent, const TreeIndex& ix,
                                  const std::vector<char>& is_marked, SimpleTree& ct,
                                  std::vector<int>& label, std::vector<int>& index_of) {
  index_of.assign(ix.n + 1, 0);
  std::vector<int> nearest(ix.n + 1, 0);  // nearest marked ancestor-or-self
  label.assign(1, 0);
  std::vector<int> cparent{0};
  for (int k = 0; k < ix.n; ++k) {
    int u = ix.preorder[k];
    int p = parent[u];
    int above = (p == 0) ? 0 : nearest[p];
    if (is_marked[u]) {
      int id = static_cast<int>(label.size());
      label.push_back(u);
      cparent.push_back(above == 0 ? 0 : index_of[above]);
      index_of[u] = id;
      nearest[u] = u;
    } else {
      nearest[u] = above;
    }
  }
  ct = SimpleTree(static_cast<int>(label.size()) - 1);
  ct.parent = cparent;
}

namespace {

std::shared_ptr<Level> finish_level(const ColoredTree& tree, std::shared_ptr<Level> lv) {
  lv->block_colors.assign(lv->part.count(), {});
  for (int b = 0; b < lv->part.count(); ++b) {
    std::vector<int> cs;
    cs.reserve(lv->part.blocks[b].size());
    for (int v : lv->part.blocks[b]) cs.push_back(tree.color[v]);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    lv->block_colors[b] = std::move(cs);
  }
  return lv;
}

std::shared_ptr<Level> build_base_level(const ColoredTree& tree, const std::vector<int>& parent,
                                        const TreeIndex& ix, std::int64_t t) {
  auto lv = std::make_shared<Level>();
  lv->factor = t;
  MarkedSet ms = compute_marked(parent, ix, t);
  lv->part = compute_partition(parent, ix, ms);
  lv->members = ms.members;
  lv->is_marked = std::move(ms.is_marked);
  lv->ctree = std::make_shared<SimpleTree>();
  build_compressed_tree(parent, ix, lv->is_marked, *lv->ctree, lv->clabel, lv->cindex);
  lv->cix = std::make_shared<TreeIndex>(build_index(*lv->ctree));
  return finish_level(tree, lv);
}

// Build the next level on the compressed tree of `prev` with relative factor r.
std::shared_ptr<Level> build_level_from(const ColoredTree& tree, const TreeIndex& ix,
                                        std::shared_ptr<Level> prev, std::int64_t r,
                                        std::int64_t abs_factor) {
  if (r <= 1) {  // same marks, same partition; only the nominal factor changes
    auto lv = std::make_shared<Level>(*prev);
    lv->factor = abs_factor;
    return lv;
  }
  const TreeIndex& pix = *prev->cix;
  MarkedSet rel_ms = compute_marked(prev->ctree->parent, pix, r);
  BlockPartition rel = compute_partition(prev->ctree->parent, pix, rel_ms);

  auto lv = std::make_shared<Level>();
  lv->factor = abs_factor;
  lv->is_marked.assign(ix.n + 1, 0);
  for (int cu : rel_ms.members) {
    int u = prev->clabel[cu];
    lv->is_marked[u] = 1;
    lv->members.push_back(u);
  }
  std::sort(lv->members.begin(), lv->members.end());

  // absolute blocks = unions of previous blocks, grouped by the relative block
  // owning each previous representative
  lv->part.block_of.assign(ix.n + 1, -1);
  lv->part.blocks.assign(rel.count(), {});
  lv->part.rep.assign(rel.count(), 0);
  lv->part.kind.assign(rel.count(), 0);
  for (int b = 0; b < rel.count(); ++b) {
    lv->part.rep[b] = prev->clabel[rel.rep[b]];
    lv->part.kind[b] = rel.kind[b];
  }
  for (int pb = 0; pb < prev->part.count(); ++pb) {
    int owner = prev->cindex[prev->part.rep[pb]];
    assert(owner != 0);
    int nb = rel.block_of[owner];
    auto& dst = lv->part.blocks[nb];
    dst.insert(dst.end(), prev->part.blocks[pb].begin(), prev->part.blocks[pb].end());
  }
  for (int b = 0; b < lv->part.count(); ++b) {
    auto& nodes = lv->part.blocks[b];
    std::sort(nodes.begin(), nodes.end());
    for (int v : nodes) lv->part.block_of[v] = b;
  }

  // compressed tree over the new members, computed on the previous ctree
  SimpleTree sub;
  std::vector<int> sub_label, sub_index;
  std::vector<char> marked_in_prev(pix.n + 1, 0);
  for (int cu = 1; cu <= pix.n; ++cu)
    if (lv->is_marked[prev->clabel[cu]]) marked_in_prev[cu] = 1;
  build_compressed_tree(prev->ctree->parent, pix, marked_in_prev, sub, sub_label, sub_index);
  lv->ctree = std::make_shared<SimpleTree>(std::move(sub));
  lv->clabel.assign(lv->ctree->n + 1, 0);
  lv->cindex.assign(ix.n + 1, 0);
  for (int id = 1; id <= lv->ctree->n; ++id) {
    lv->clabel[id] = prev->clabel[sub_label[id]];
    lv->cindex[lv->clabel[id]] = id;
  }
  lv->cix = std::make_shared<TreeIndex>(build_index(*lv->ctree));
  return finish_level(tree, lv);
}

// Descending stratification factors t3 = s_0 > s_1 > ... > s_m = t2 with
// s_{k+1} = floor(t2 * ln(s_k/t2)^2), clamped to terminate.
std::vector<std::int64_t> strat_factors(std::int64_t t2, std::int64_t t3) {
  std::vector<std::int64_t> out{t3};
  std::int64_t cur = t3;
  while (cur > t2) {
    double ratio = static_cast<double>(cur) / static_cast<double>(t2);
    double lg = std::log(ratio);
    std::int64_t nxt = static_cast<std::int64_t>(
        std::floor(static_cast<double>(t2) * lg * lg));
    if (nxt <= t2 || nxt >= cur) nxt = t2;
    out.push_back(nxt);
    cur = nxt;
  }
  return out;
}

}  // namespace

std::int64_t default_t1(int n, int word_size) {
  int L = std::max(2, ceil_log2(std::max(1, n)));
  int LL = std::max(1, ceil_log2(L));
  double base = std::sqrt(static_cast<double>(n) / std::max(1, word_size));
  auto t1 = static_cast<std::int64_t>(std::ceil(base / LL));
  return std::max<std::int64_t>(1, t1);
}

BlockTreeSet build_block_trees(const Level& low, const Level& high) {
  BlockTreeSet bt;
  const int nlow = low.part.count();
  const int nhigh = high.part.count();
  bt.subs.assign(nhigh, {});
  bt.parent.assign(nhigh, {});
  bt.high_of.assign(nlow, -1);
  bt.rel_of.assign(nlow, -1);
  for (int b = 0; b < nlow; ++b) {
    int hb = high.part.block_of[low.part.blocks[b].front()];
    bt.high_of[b] = hb;
    bt.rel_of[b] = static_cast<int>(bt.subs[hb].size());
    bt.subs[hb].push_back(b);
  }
  for (int hb = 0; hb < nhigh; ++hb) bt.parent[hb].assign(bt.subs[hb].size(), -1);
  return bt;
}

BlockHierarchy compute_hierarchy(const ColoredTree& tree, const TreeIndex& ix,
                                 std::int64_t t1) {
  BlockHierarchy h;
  h.tree = &tree;
  h.ix = &ix;
  const int n = tree.n;
  h.L = std::max(2, ceil_log2(std::max(1, n)));
  h.LL = std::max(1, ceil_log2(h.L));
  const std::int64_t sqL = ceil_sqrt(h.L);
  t1 = std::max<std::int64_t>(1, t1);
  h.t[1] = std::min<std::int64_t>(t1, n);
  h.t[2] = std::min<std::int64_t>(h.t[1] * h.LL, n);
  h.t[3] = std::min<std::int64_t>(h.t[2] * sqL, n);
  h.t[4] = std::min<std::int64_t>(h.t[3] * sqL, n);
  h.degenerate = h.t[1] >= n;

  h.level[1] = build_base_level(tree, tree.parent, ix, h.t[1]);
  h.level[2] = build_level_from(tree, ix, h.level[1], ceil_div(h.t[2], h.t[1]), h.t[2]);

  // stratification chain, built fine-to-coarse so level 3 tops it
  std::vector<std::int64_t> sf = strat_factors(h.t[2], h.t[3]);  // descending
  std::vector<std::shared_ptr<Level>> chain{h.level[2]};         // ascending factors
  for (size_t k = sf.size(); k-- > 1;) {  // sf[k] for k = m-1 .. 1 are intermediates
    std::int64_t f = sf[k];
    if (f <= chain.back()->factor) continue;
    chain.push_back(build_level_from(tree, ix, chain.back(),
                                     ceil_div(f, chain.back()->factor), f));
  }
  h.level[3] = build_level_from(tree, ix, chain.back(),
                                ceil_div(h.t[3], chain.back()->factor), h.t[3]);
  chain.push_back(h.level[3]);
  h.strat.assign(chain.rbegin(), chain.rend());  // descending: t3 ... t2

  h.level[4] = build_level_from(tree, ix, h.level[3], ceil_div(h.t[4], h.t[3]), h.t[4]);

  for (int k = 1; k <= 3; ++k)
    h.btree[k] = build_block_trees(*h.level[k], *h.level[k + 1]);
  // parent links within each high block: block of the parent of the topmost node
  for (int k = 1; k <= 3; ++k) {
    const Level& low = *h.level[k];
    BlockTreeSet& bt = h.btree[k];
    for (int b = 0; b < low.part.count(); ++b) {
      int top = low.part.blocks[b].front();
      for (int v : low.part.blocks[b])
        if (ix.depth[v] < ix.depth[top]) top = v;
      int p = tree.parent[top];
      if (p == 0) continue;
      int pb = low.part.block_of[p];
      if (bt.high_of[pb] == bt.high_of[b] && pb != b)
        bt.parent[bt.high_of[b]][bt.rel_of[b]] = bt.rel_of[pb];
    }
  }
  return h;
}

// ---------------------------------------------------------------- checkers

std::string check_marked_set(const std::vector<int>& parent, const TreeIndex& ix,
                             const MarkedSet& ms) {
  const int n = ix.n;
  if (ms.members.empty()) return "marked set is empty";
  // LCA closure via auxiliary construction
  AuxTree aux = build_aux_tree(ix, ms.members);
  for (int u : aux.verts)
    if (!ms.is_marked[u]) return "not LCA-closed at node " + std::to_string(u);
  // component gap bound
  std::vector<std::int64_t> csize(n + 1, 0);
  std::vector<int> comp(n + 1, 0);
  int ncomp = 0;
  for (int k = 0; k < n; ++k) {
    int u = ix.preorder[k];
    if (ms.is_marked[u]) continue;
    int p = parent[u];
    comp[u] = (p != 0 && !ms.is_marked[p]) ? comp[p] : ++ncomp;
    if (++csize[comp[u]] > ms.t)
      return "unmarked component exceeds t at node " + std::to_string(u);
  }
  std::int64_t lim = 4 * ceil_div(static_cast<std::int64_t>(n), ms.t);
  if (static_cast<std::int64_t>(ms.members.size()) > lim)
    return "marked set larger than 4*ceil(n/t): " + std::to_string(ms.members.size());
  return {};
}

std::string check_partition(const std::vector<int>& parent, const TreeIndex& ix,
                            const MarkedSet& ms, const BlockPartition& part) {
  const int n = ix.n;
  std::vector<char> seen(n + 1, 0);
  for (int b = 0; b < part.count(); ++b) {
    const auto& nodes = part.blocks[b];
    if (nodes.empty()) return "empty block";
    if (static_cast<std::int64_t>(nodes.size()) > 2 * ms.t)
      return "block " + std::to_string(b) + " exceeds 2t";
    int rep = part.rep[b];
    if (rep < 1 || rep > n || !ms.is_marked[rep]) return "bad representative";
    // connectivity of block + representative: every node's parent is inside
    // the set or the node is the set's top and equals... (rooted check below)
    std::vector<char> in(n + 1, 0);
    in[rep] = 1;
    for (int v : nodes) in[v] = 1;
    int roots = 0;
    for (int v : nodes) {
      if (part.block_of[v] != b) return "block_of inconsistent";
      if (seen[v]) return "node in two blocks";
      seen[v] = 1;
      int p = parent[v];
      if (p == 0 || !in[p]) ++roots;
    }
    if (part.kind[b] == 1) {
      // every leaf-bin component hangs directly below the representative
      if (roots != 0) return "leaf bin component not below representative";
    } else {
      // internal block: connected on its own, topmost node is the block's root
      if (roots > 1) return "internal block disconnected";
    }
    (void)ix;
  }
  for (int v = 1; v <= n; ++v)
    if (!seen[v]) return "node missing from partition: " + std::to_string(v);
  std::int64_t lim = 2 * static_cast<std::int64_t>(ms.members.size()) +
                     ceil_div(static_cast<std::int64_t>(n), ms.t) + 1;
  if (part.count() > lim) return "too many blocks";
  return {};
}

std::string check_hierarchy(const BlockHierarchy& h) {
  for (int k = 1; k < 4; ++k)
    if (h.t[k] > h.t[k + 1]) return "factors not monotone";
  const int n = h.tree->n;
  // nesting of marked sets and partitions
  for (int k = 1; k < 4; ++k) {
    const Level& lo = *h.level[k];
    const Level& hi = *h.level[k + 1];
    for (int u = 1; u <= n; ++u)
      if (hi.is_marked[u] && !lo.is_marked[u])
        return "marked sets not nested at level " + std::to_string(k + 1);
    for (int b = 0; b < lo.part.count(); ++b) {
      int hb = hi.part.block_of[lo.part.blocks[b].front()];
      for (int v : lo.part.blocks[b])
        if (hi.part.block_of[v] != hb)
          return "partition not nested at level " + std::to_string(k + 1);
    }
  }
  // stratification chain descends from t3 to t2 and stays nested
  if (h.strat.empty() || h.strat.front()->factor != h.t[3] ||
      h.strat.back()->factor != h.t[2])
    return "stratification endpoints wrong";
  for (size_t k = 0; k + 1 < h.strat.size(); ++k) {
    const Level& coarse = *h.strat[k];
    const Level& fine = *h.strat[k + 1];
    if (coarse.factor < fine.factor) return "stratification not descending";
    for (int b = 0; b < fine.part.count(); ++b) {
      int cb = coarse.part.block_of[fine.part.blocks[b].front()];
      for (int v : fine.part.blocks[b])
        if (coarse.part.block_of[v] != cb) return "stratification not nested";
    }
  }
  return {};
}

}  // namespace pathfreq
