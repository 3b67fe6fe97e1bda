#include "pathfreq/minority.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace pathfreq {

// ---------------------------------------------------------------------------
// DistinctAncestorIndex

DistinctAncestorIndex::DistinctAncestorIndex(const ColoredTree& tree, const TreeIndex& ix,
                                             const VirtualForest& vf)
    : tree_(&tree), ix_(&ix) {
  const int n = tree.n;
  pool_.reserve(static_cast<std::size_t>(n) * 2 + 1);
  root_at_.assign(n + 1, -1);
  SplitMix64 prio_rng(0xDA1DA1DA1ull);

  // preorder over the real tree; versions persist, so no undo on exit
  for (int u : ix.preorder) {
    std::int32_t r = root_at_[tree.parent[u]];  // parent 0 -> -1 (empty)
    if (vf.vparent[u] != 0) r = erase(r, ix.depth[vf.vparent[u]]);
    r = insert(r, ix.depth[u], static_cast<std::uint32_t>(prio_rng.next() >> 32));
    root_at_[u] = r;
  }
}

std::int32_t DistinctAncestorIndex::copy(std::int32_t t) {
  pool_.push_back(pool_[t]);
  return static_cast<std::int32_t>(pool_.size()) - 1;
}

// a: keys < key, b: keys >= key
void DistinctAncestorIndex::split(std::int32_t t, int key, std::int32_t& a, std::int32_t& b) {
  if (t < 0) {
    a = b = -1;
    return;
  }
  std::int32_t c = copy(t);
  // note: recursion may reallocate the pool, so never pass pool_[c] members
  // by reference into it
  if (pool_[c].key < key) {
    std::int32_t x, y;
    split(pool_[c].r, key, x, y);
    pool_[c].r = x;
    a = c;
    b = y;
  } else {
    std::int32_t x, y;
    split(pool_[c].l, key, x, y);
    pool_[c].l = y;
    a = x;
    b = c;
  }
}

std::int32_t DistinctAncestorIndex::merge(std::int32_t a, std::int32_t b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (pool_[a].prio >= pool_[b].prio) {
    std::int32_t c = copy(a);
    std::int32_t m = merge(pool_[c].r, b);
    pool_[c].r = m;
    return c;
  }
  std::int32_t c = copy(b);
  std::int32_t m = merge(a, pool_[c].l);
  pool_[c].l = m;
  return c;
}

std::int32_t DistinctAncestorIndex::insert(std::int32_t t, int key, std::uint32_t prio) {
  std::int32_t a, b;
  split(t, key, a, b);
  pool_.push_back({key, prio, -1, -1});
  std::int32_t m = static_cast<std::int32_t>(pool_.size()) - 1;
  return merge(merge(a, m), b);
}

std::int32_t DistinctAncestorIndex::erase(std::int32_t t, int key) {
  std::int32_t a, b, m, c;
  split(t, key, a, b);
  split(b, key + 1, m, c);
  assert(m >= 0 && pool_[m].l < 0 && pool_[m].r < 0);
  return merge(a, c);
}

std::vector<std::pair<int, int>> DistinctAncestorIndex::nearest(int u, int k,
                                                                int min_depth) const {
  std::vector<std::pair<int, int>> out;
  if (k <= 0) return out;
  out.reserve(static_cast<std::size_t>(k));
  // largest keys first = closest to u first
  std::vector<std::int32_t> stack;
  std::int32_t t = root_at_[u];
  while ((t >= 0 || !stack.empty()) && static_cast<int>(out.size()) < k) {
    while (t >= 0) {
      if (pool_[t].key < min_depth) {
        t = pool_[t].r;  // everything in the left subtree is shallower
        continue;
      }
      stack.push_back(t);
      t = pool_[t].r;
    }
    if (stack.empty()) break;
    t = stack.back();
    stack.pop_back();
    int d = pool_[t].key;
    int node = ix_->level_ancestor(u, ix_->depth[u] - d);
    out.emplace_back(node, tree_->color[node]);
    t = pool_[t].l;
  }
  return out;
}

// ---------------------------------------------------------------------------
// MinorityIndex

MinorityIndex::MinorityIndex(const ColoredTree& tree, const TreeIndex& ix,
                             const VirtualForest& vf)
    : tree_(&tree), ix_(&ix), vf_(&vf), dai_(tree, ix, vf) {}

std::int64_t MinorityIndex::exact_frequency(int i, int j, int c) const {
  return vf_->path_color_frequency(i, j, c);
}

MinorityIndex::Phases MinorityIndex::run_phases(int i, int j, double alpha) const {
  ix_->check_node(i);
  ix_->check_node(j);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw QueryError("alpha must be in (0, 1]");

  const int w = ix_->lca(i, j);
  const int dw = ix_->depth[w];
  const std::int64_t N = ix_->dist(i, j) + 1;
  Phases ph;
  ph.threshold = alpha * static_cast<double>(N);

  // Phase 1: twice ceil(2/alpha) nearest distinct colors per side.  The
  // doubling makes the collection exhaustive whenever a side carries at most
  // 2*ceil(2/alpha) distinct colors, at no asymptotic cost.
  const int k = static_cast<int>(std::ceil(2.0 / alpha));
  const std::int64_t kc64 = std::min<std::int64_t>(2 * static_cast<std::int64_t>(k), tree_->n);
  const int kc = static_cast<int>(kc64);
  std::vector<std::pair<int, int>> sl = dai_.nearest(i, kc, dw);
  std::vector<std::pair<int, int>> sr = dai_.nearest(j, kc, dw);

  // Phase 2 runs on the raw sets: colors seen from both ends have both
  // extremal occurrences in hand, so their exact frequency is O(1).  Return
  // the smallest exact minority, otherwise drop the overlap entirely.
  // (Overlap handling must precede the one-sided pruning: a color pruned
  // from one side only would otherwise masquerade as a one-sided candidate
  // even though its total frequency is too high, breaking the guarantee in
  // the regime where both sides were collected exhaustively.)
  std::sort(sl.begin(), sl.end(), [](auto& a, auto& b) { return a.second < b.second; });
  std::sort(sr.begin(), sr.end(), [](auto& a, auto& b) { return a.second < b.second; });
  std::vector<char> overlap_l(sl.size(), 0), overlap_r(sr.size(), 0);
  {
    std::size_t a = 0, b = 0;
    while (a < sl.size() && b < sr.size()) {
      if (sl[a].second < sr[b].second) {
        ++a;
      } else if (sl[a].second > sr[b].second) {
        ++b;
      } else {
        overlap_l[a] = overlap_r[b] = 1;
        std::int64_t f = vf_->freq_contracted(sl[a].first, sr[b].first);
        if (!ph.answered && static_cast<double>(f) <= ph.threshold) {
          ph.answered = true;
          ph.result = {true, sl[a].second, f, 0};
        }
        ++a;
        ++b;
      }
    }
  }
  if (ph.answered) return ph;

  // Phase 3: drop one-sided colors already above the threshold on their own
  // side.  Side frequency of the candidate at x: occurrences on the chain
  // from x up to the deepest same-colored ancestor below w.
  auto side_freq = [&](int x, int c) -> std::int64_t {
    std::int64_t below = 0;
    if (w != 1) {
      auto anc = vf_->lowest_colored_ancestor(tree_->parent[w], c);
      if (anc) below = vf_->vdepth[*anc];
    }
    return vf_->vdepth[x] - below;
  };

  // Phase 4 setup: D = pruned disjoint union, sorted by color.
  for (std::size_t a = 0; a < sl.size(); ++a)
    if (!overlap_l[a] &&
        static_cast<double>(side_freq(sl[a].first, sl[a].second)) <= ph.threshold)
      ph.d.push_back({sl[a].second, sl[a].first});
  for (std::size_t b = 0; b < sr.size(); ++b)
    if (!overlap_r[b] &&
        static_cast<double>(side_freq(sr[b].first, sr[b].second)) <= ph.threshold)
      ph.d.push_back({sr[b].second, sr[b].first});
  std::sort(ph.d.begin(), ph.d.end(),
            [](const Candidate& a, const Candidate& b) { return a.color < b.color; });
  return ph;
}

MinorityResult MinorityIndex::monte_carlo(int i, int j, double alpha, SplitMix64& rng) const {
  Phases ph = run_phases(i, j, alpha);
  if (ph.answered) return ph.result;
  if (ph.d.empty()) return {};
  const Candidate& c = ph.d[rng.below(ph.d.size())];
  // unverified answer; the frequency is still reported exactly
  return {true, c.color, exact_frequency(i, j, c.color), 0};
}

MinorityResult MinorityIndex::las_vegas(int i, int j, double alpha, SplitMix64& rng) const {
  Phases ph = run_phases(i, j, alpha);
  if (ph.answered) return ph.result;
  std::vector<Candidate> d = std::move(ph.d);
  int verifications = 0;
  while (!d.empty()) {
    std::size_t idx = rng.below(d.size());
    ++verifications;
    std::int64_t f = exact_frequency(i, j, d[idx].color);
    if (static_cast<double>(f) <= ph.threshold)
      return {true, d[idx].color, f, verifications};
    d[idx] = d.back();
    d.pop_back();
  }
  MinorityResult none;
  none.verifications = verifications;
  return none;
}

}  // namespace pathfreq
