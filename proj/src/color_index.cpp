#include "pathfreq/color_index.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace pathfreq {

namespace {

// path between two nodes by depth-compared parent walk (short block-local paths)
std::vector<int> walk_path(const ColoredTree& t, const TreeIndex& ix, int a, int b) {
  std::vector<int> from_a{a}, from_b{b};
  while (a != b) {
    if (ix.depth[a] >= ix.depth[b]) {
      a = t.parent[a];
      from_a.push_back(a);
    } else {
      b = t.parent[b];
      from_b.push_back(b);
    }
  }
  from_a.pop_back();  // drop duplicated meeting node
  from_a.insert(from_a.end(), from_b.rbegin(), from_b.rend());
  return from_a;
}

U64Dict build_dict(const std::map<std::uint64_t, std::uint32_t>& kv, std::uint64_t seed) {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> vals;
  keys.reserve(kv.size());
  vals.reserve(kv.size());
  for (auto& [k, v] : kv) {
    keys.push_back(k);
    vals.push_back(v);
  }
  U64Dict d;
  d.build(keys, vals, seed);
  return d;
}

}  // namespace

ColorIndex build_color_index(const ColoredTree& tree, const TreeIndex& ix,
                             const BlockHierarchy& h, const VirtualForest& vf) {
  ColorIndex ci;
  ci.tree = &tree;
  ci.ix = &ix;
  ci.h = &h;
  ci.vf = &vf;

  // distinct levels (stratification shares levels 2 and 3 by pointer)
  for (int k = 1; k <= 4; ++k) {
    ci.levels.push_back(h.level[k]);
    ci.strat_index[k] = k - 1;
  }
  for (const auto& lv : h.strat) {
    int found = -1;
    for (size_t li = 0; li < ci.levels.size(); ++li)
      if (ci.levels[li].get() == lv.get()) { found = static_cast<int>(li); break; }
    if (found < 0) {
      found = static_cast<int>(ci.levels.size());
      ci.levels.push_back(lv);
    }
    ci.strat_levels.push_back(found);
  }

  // topmost dictionaries: (color, block) -> minimum-depth occurrence
  for (size_t li = 0; li < ci.levels.size(); ++li) {
    const Level& lv = *ci.levels[li];
    std::map<std::uint64_t, std::uint32_t> kv;
    for (int b = 0; b < lv.part.count(); ++b) {
      for (int v : lv.part.blocks[b]) {
        std::uint64_t key = ColorIndex::key(tree.color[v], b);
        auto [it, fresh] = kv.try_emplace(key, v);
        if (!fresh && ix.depth[v] < ix.depth[static_cast<int>(it->second)])
          it->second = v;
      }
    }
    ci.topmost.push_back(build_dict(kv, 0xc01d1000 + li));
  }

  for (int k = 1; k <= 3; ++k) {
    const Level& low = *h.level[k];
    const BlockTreeSet& bt = h.btree[k];

    // presence masks over sub-blocks
    std::map<std::uint64_t, std::uint32_t> mask_id;
    for (int b = 0; b < low.part.count(); ++b) {
      int hb = bt.high_of[b];
      for (int c : low.block_colors[b]) {
        std::uint64_t key = ColorIndex::key(c, hb);
        auto [it, fresh] = mask_id.try_emplace(
            key, static_cast<std::uint32_t>(ci.pres_masks[k].size()));
        if (fresh)
          ci.pres_masks[k].emplace_back(static_cast<int>(bt.subs[hb].size()));
        ci.pres_masks[k][it->second].set(bt.rel_of[b]);
      }
    }
    ci.pres[k] = build_dict(mask_id, 0x9a5e1000 + k);

    // edge-entry dictionary: deepest occurrence on the representative path,
    // for colors missing the sub-block itself
    std::map<std::uint64_t, std::uint32_t> ee;
    for (int b = 0; b < low.part.count(); ++b) {
      int hb = bt.high_of[b];
      int prel = bt.parent[hb][bt.rel_of[b]];
      if (prel < 0) continue;
      int pb = bt.subs[hb][prel];
      std::vector<int> path = walk_path(tree, ix, low.part.rep[b], low.part.rep[pb]);
      const auto& own = low.block_colors[b];
      for (int v : path) {
        int c = tree.color[v];
        if (std::binary_search(own.begin(), own.end(), c)) continue;
        std::uint64_t key = ColorIndex::key(c, b);
        auto [it, fresh] = ee.try_emplace(key, v);
        if (!fresh && ix.depth[v] > ix.depth[static_cast<int>(it->second)])
          it->second = v;
      }
    }
    ci.edge_entries[k] = ee.size();
    ci.edge[k] = build_dict(ee, 0xed6e1000 + k);
  }
  return ci;
}

int ColorIndex::first_occurrence_on_path(int i, int j, int k, int c) const {
  ix->check_node(i);
  ix->check_node(j);
  if (k < 2 || k > 4) throw QueryError("level pair out of range");
  const int pair = k - 1;
  int bk = h->level[k]->part.block_of[i];
  int bk1 = h->level[k - 1]->part.block_of[i];
  const SmallBitset* m = color_mask(pair, c, bk);
  if (m == nullptr)
    throw QueryError("first_occurrence precondition: color absent from the outer block");
  if (m->test(h->btree[pair].rel_of[bk1]))
    throw QueryError("first_occurrence precondition: color present in the inner block");

  int w = ix->lca(i, j);
  // occurrence on the i-side (deepest c-ancestor of i at or below the LCA)
  if (auto xi = vf->colored_ancestor_at_least(i, c, ix->depth[w])) return *xi;
  // otherwise the nearest occurrence sits on the j-side: take the deepest
  // c-ancestor of j above-or-at depth(w), then jump up in the virtual tree to
  // the occurrence just below the lowest c-ancestor of the LCA
  auto xj = vf->colored_ancestor_at_least(j, c, ix->depth[w]);
  if (!xj) throw QueryError("first_occurrence precondition: color absent from the path");
  auto anc = vf->lowest_colored_ancestor(w, c);
  int steps = anc ? vf->vdepth[*xj] - vf->vdepth[*anc] - 1 : vf->vdepth[*xj] - 1;
  int out = vf->vlevel_ancestor(*xj, steps);
  assert(tree->color[out] == c && ix->is_ancestor(out, j) && ix->is_ancestor(w, out));
  return out;
}

}  // namespace pathfreq
