#include <algorithm>
#include <cassert>
#include <set>
#include <unordered_map>

#include "pathfreq/engine.hpp"

namespace pathfreq {

namespace {

// Iterative DFS from an arbitrary node over the undirected tree (parent edge
// plus child edges).  enter(v) is called when v joins the root-to-v path of
// the traversal, exit(v) when it leaves; enter(s) fires before the first step.
template <typename FEnter, typename FExit>
void reroot_dfs(const TreeIndex& ix, const std::vector<int>& parent, int s, FEnter enter,
                FExit exit) {
  struct Frame {
    int v, from, ci;
    bool parent_done;
  };
  std::vector<Frame> st;
  st.push_back({s, 0, ix.child_off[s], false});
  enter(s);
  while (!st.empty()) {
    Frame& f = st.back();
    int nxt = 0;
    if (!f.parent_done) {
      f.parent_done = true;
      if (parent[f.v] != 0 && parent[f.v] != f.from) nxt = parent[f.v];
    }
    while (nxt == 0 && f.ci < ix.child_off[f.v + 1]) {
      int c = ix.child_dat[f.ci++];
      if (c != f.from) nxt = c;
    }
    if (nxt != 0) {
      enter(nxt);
      st.push_back({nxt, f.v, ix.child_off[nxt], false});
    } else {
      exit(f.v);
      st.pop_back();
    }
  }
}

// sorted(a) minus sorted(b)
std::vector<int> color_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

// Global table over ordered t3-block pairs.  Per source block one DFS keeps
// the path color counts of all colors absent from the source block in an
// ordered set keyed by (value, color); at each target representative the
// target's own colors are lifted out, the set maximum is recorded, and the
// lifted colors are restored.
void Engine::build_t1(GKind kind) {
  SubtaskTables& T = tabs_[static_cast<int>(kind)];
  const Level& l3 = *h_.level[3];
  const int nb3 = l3.part.count();
  const int nc = tree_.num_colors;
  T.t1.assign(static_cast<std::size_t>(nb3) * nb3, -1);

  std::vector<std::int64_t> cnt(nc + 1, 0);
  std::vector<std::int64_t> wsum(kind == GKind::Sum ? nc + 1 : 1, 0);
  std::vector<char> blocked(nc + 1, 0);
  std::set<std::pair<std::int64_t, int>> best;
  std::vector<int> lifted;

  auto value = [&](int c) -> std::int64_t {
    switch (kind) {
      case GKind::Mode: return cnt[c];
      case GKind::Lfe: return -cnt[c];
      default: return wsum[c];
    }
  };

  for (int src = 0; src < nb3; ++src) {
    for (int c : l3.block_colors[src]) blocked[c] = 1;
    auto enter = [&](int v) {
      ++ops_;
      int c = tree_.color[v];
      if (!blocked[c]) {
        if (cnt[c] > 0) best.erase({value(c), c});
        ++cnt[c];
        if (kind == GKind::Sum) wsum[c] += tree_.weight[v];
        best.insert({value(c), c});
      }
      for (int q : reps3_at_[v]) {
        if (q == src) continue;
        lifted.clear();
        for (int bc : l3.block_colors[q]) {
          ++ops_;
          if (!blocked[bc] && cnt[bc] > 0) {
            best.erase({value(bc), bc});
            lifted.push_back(bc);
          }
        }
        if (!best.empty()) {
          auto it = best.end();
          --it;
          T.t1[static_cast<std::size_t>(src) * nb3 + q] = it->second;
        }
        for (int bc : lifted) best.insert({value(bc), bc});
      }
    };
    auto leave = [&](int v) {
      int c = tree_.color[v];
      if (!blocked[c]) {
        best.erase({value(c), c});
        --cnt[c];
        if (kind == GKind::Sum) wsum[c] -= tree_.weight[v];
        if (cnt[c] > 0) best.insert({value(c), c});
      }
    };
    reroot_dfs(ix_, tree_.parent, l3.part.rep[src], enter, leave);
    assert(best.empty());
    for (int c : l3.block_colors[src]) blocked[c] = 0;
  }
}

// Ascent table (t2-block, t3-block).  Per source t2-block X one DFS maintains
// per-slot path counters for colors in C(B3(X)) \ C(X); at each target the
// active slots are scanned, skipping colors present in the target, and the
// entry stores which t1 sub-block of B3(X) holds the winning color.
void Engine::build_t2(GKind kind) {
  SubtaskTables& T = tabs_[static_cast<int>(kind)];
  const Level& l1 = *h_.level[1];
  const Level& l2 = *h_.level[2];
  const Level& l3 = *h_.level[3];
  const int nb2 = l2.part.count();
  const int nb3 = l3.part.count();
  const int nc = tree_.num_colors;
  T.t2.assign(static_cast<std::size_t>(nb2) * nb3, 0xFF);

  std::vector<int> slot_of(nc + 1, -1);
  std::vector<int> crel(nc + 1, -1);  // color -> relative t1-block index in B3(X)
  std::vector<int> crel_touched;

  for (int src = 0; src < nb2; ++src) {
    int hb = h_.btree[2].high_of[src];
    std::vector<int> allowed = color_difference(l3.block_colors[hb], l2.block_colors[src]);
    const int ns = static_cast<int>(allowed.size());
    for (int s = 0; s < ns; ++s) slot_of[allowed[s]] = s;
    for (std::size_t r = 0; r < sub13_[hb].size(); ++r)
      for (int c : l1.block_colors[sub13_[hb][r]])
        if (crel[c] < 0) {
          crel[c] = static_cast<int>(r);
          crel_touched.push_back(c);
        }

    std::vector<std::int64_t> cnt(ns, 0), wsum(kind == GKind::Sum ? ns : 0, 0);
    std::vector<int> active, apos(ns, -1);
    auto value = [&](int s) -> std::int64_t {
      switch (kind) {
        case GKind::Mode: return cnt[s];
        case GKind::Lfe: return -cnt[s];
        default: return wsum[s];
      }
    };

    auto enter = [&](int v) {
      ++ops_;
      int s = slot_of[tree_.color[v]];
      if (s >= 0) {
        if (cnt[s]++ == 0) {
          apos[s] = static_cast<int>(active.size());
          active.push_back(s);
        }
        if (kind == GKind::Sum) wsum[s] += tree_.weight[v];
      }
      for (int q : reps3_at_[v]) {
        bool found = false;
        std::int64_t bv = 0;
        int bc = 0;
        for (int as : active) {
          ++ops_;
          int c = allowed[as];
          if (ci_.contains_level(c, q, 3)) continue;
          std::int64_t val = value(as);
          if (!found || val > bv || (val == bv && c < bc)) {
            found = true;
            bv = val;
            bc = c;
          }
        }
        if (found) {
          assert(crel[bc] >= 0 && crel[bc] < 255);
          T.t2[static_cast<std::size_t>(src) * nb3 + q] = static_cast<std::uint8_t>(crel[bc]);
        }
      }
    };
    auto leave = [&](int v) {
      int s = slot_of[tree_.color[v]];
      if (s >= 0) {
        if (--cnt[s] == 0) {
          int last = active.back();
          active[apos[s]] = last;
          apos[last] = apos[s];
          active.pop_back();
          apos[s] = -1;
        }
        if (kind == GKind::Sum) wsum[s] -= tree_.weight[v];
      }
    };
    reroot_dfs(ix_, tree_.parent, l2.part.rep[src], enter, leave);
    assert(active.empty());
    for (int c : allowed) slot_of[c] = -1;
    for (int c : crel_touched) crel[c] = -1;
    crel_touched.clear();
  }
}

// Ascent table (t1-block, t3-block), built batched per t2-block W.  One
// root-based DFS records, for colors of C(W), the count (and weight sum) of
// occurrences among strict-or-self ancestors at every needed node: the
// representatives of W's t1 sub-blocks, all t3 representatives, and all
// pairwise LCAs.  The path frequency of c over (u, v) with w = lca(u, v) is
// then cnt(u) + cnt(v) - 2 cnt(w) + [color(w) = c].
void Engine::build_t3(GKind kind) {
  SubtaskTables& T = tabs_[static_cast<int>(kind)];
  const Level& l1 = *h_.level[1];
  const Level& l2 = *h_.level[2];
  const Level& l3 = *h_.level[3];
  const int nb1 = l1.part.count();
  const int nb2 = l2.part.count();
  const int nb3 = l3.part.count();
  const int nc = tree_.num_colors;
  T.t3.assign(static_cast<std::size_t>(nb1) * nb3, 0xFF);

  std::vector<int> vreps(nb3);
  for (int q = 0; q < nb3; ++q) vreps[q] = l3.part.rep[q];

  std::vector<int> slot_of(nc + 1, -1);
  std::vector<char> blocked(nc + 1, 0);
  std::vector<int> crel(nc + 1, -1);  // color -> index of a containing sub-block
  std::vector<int> crel_touched;
  std::vector<std::int64_t> cur, curw;
  std::vector<std::int64_t> rec, recw;

  for (int W = 0; W < nb2; ++W) {
    const std::vector<int>& colors = l2.block_colors[W];
    const std::vector<int>& subs = h_.btree[1].subs[W];
    const int ns = static_cast<int>(colors.size());
    for (int s = 0; s < ns; ++s) slot_of[colors[s]] = s;
    for (std::size_t r = 0; r < subs.size(); ++r)
      for (int c : l1.block_colors[subs[r]])
        if (crel[c] < 0) {
          crel[c] = static_cast<int>(r);
          crel_touched.push_back(c);
        }

    // rows: one per distinct needed node
    std::unordered_map<int, int> row_of;
    auto need = [&](int v) {
      auto [it, fresh] = row_of.try_emplace(v, static_cast<int>(row_of.size()));
      (void)fresh;
      return it->second;
    };
    std::vector<int> urow(subs.size());
    for (std::size_t xi = 0; xi < subs.size(); ++xi) urow[xi] = need(l1.part.rep[subs[xi]]);
    std::vector<int> vrow(nb3);
    for (int q = 0; q < nb3; ++q) vrow[q] = need(vreps[q]);
    std::vector<std::vector<int>> wrow(subs.size(), std::vector<int>(nb3));
    for (std::size_t xi = 0; xi < subs.size(); ++xi)
      for (int q = 0; q < nb3; ++q)
        wrow[xi][q] = need(ix_.lca(l1.part.rep[subs[xi]], vreps[q]));

    const int rows = static_cast<int>(row_of.size());
    cur.assign(ns, 0);
    rec.assign(static_cast<std::size_t>(rows) * ns, 0);
    if (kind == GKind::Sum) {
      curw.assign(ns, 0);
      recw.assign(static_cast<std::size_t>(rows) * ns, 0);
    }

    auto enter = [&](int v) {
      ++ops_;
      int s = slot_of[tree_.color[v]];
      if (s >= 0) {
        ++cur[s];
        if (kind == GKind::Sum) curw[s] += tree_.weight[v];
      }
      auto it = row_of.find(v);
      if (it != row_of.end()) {
        ops_ += ns;
        std::copy(cur.begin(), cur.end(), rec.begin() + static_cast<std::size_t>(it->second) * ns);
        if (kind == GKind::Sum)
          std::copy(curw.begin(), curw.end(),
                    recw.begin() + static_cast<std::size_t>(it->second) * ns);
      }
    };
    auto leave = [&](int v) {
      int s = slot_of[tree_.color[v]];
      if (s >= 0) {
        --cur[s];
        if (kind == GKind::Sum) curw[s] -= tree_.weight[v];
      }
    };
    reroot_dfs(ix_, tree_.parent, 1, enter, leave);

    for (std::size_t xi = 0; xi < subs.size(); ++xi) {
      int X = subs[xi];
      for (int c : l1.block_colors[X]) blocked[c] = 1;
      const std::int64_t* ru = &rec[static_cast<std::size_t>(urow[xi]) * ns];
      for (int q = 0; q < nb3; ++q) {
        int w = ix_.lca(l1.part.rep[X], vreps[q]);
        const std::int64_t* rv = &rec[static_cast<std::size_t>(vrow[q]) * ns];
        const std::int64_t* rw = &rec[static_cast<std::size_t>(wrow[xi][q]) * ns];
        int wslot = slot_of[tree_.color[w]];
        bool found = false;
        std::int64_t bv = 0;
        int bc = 0;
        for (int s = 0; s < ns; ++s) {
          ++ops_;
          int c = colors[s];
          if (blocked[c]) continue;
          std::int64_t f = ru[s] + rv[s] - 2 * rw[s] + (s == wslot ? 1 : 0);
          if (f == 0) continue;
          if (ci_.contains_level(c, q, 3)) continue;
          std::int64_t val;
          switch (kind) {
            case GKind::Mode: val = f; break;
            case GKind::Lfe: val = -f; break;
            default: {
              const std::int64_t* pu = &recw[static_cast<std::size_t>(urow[xi]) * ns];
              const std::int64_t* pv = &recw[static_cast<std::size_t>(vrow[q]) * ns];
              const std::int64_t* pw = &recw[static_cast<std::size_t>(wrow[xi][q]) * ns];
              val = pu[s] + pv[s] - 2 * pw[s] + (s == wslot ? tree_.weight[w] : 0);
            }
          }
          if (!found || val > bv || (val == bv && c < bc)) {
            found = true;
            bv = val;
            bc = c;
          }
        }
        if (found) {
          assert(crel[bc] >= 0 && crel[bc] < 255);
          T.t3[static_cast<std::size_t>(X) * nb3 + q] = static_cast<std::uint8_t>(crel[bc]);
        }
      }
      for (int c : l1.block_colors[X]) blocked[c] = 0;
    }
    for (int c : colors) slot_of[c] = -1;
    for (int c : crel_touched) crel[c] = -1;
    crel_touched.clear();
  }
}

// Stratified tables.  For stratum k the fine level partitions into blocks of
// factor s_k, the coarse one into blocks of factor s_{k-1}; the class for an
// ordered fine pair (P, Q) is the path colors of C(P^) \ (C(P) u C(Q)) where
// P^ is P's coarse block.  The entry is the truncated position of a winning
// occurrence in the sorted node list of P^, so a query only scans a short
// window of that list.
void Engine::build_t5(GKind kind) {
  SubtaskTables& T = tabs_[static_cast<int>(kind)];
  T.t5.clear();
  T.t5_bits = 0;
  if (opt_.fallback) return;
  const int nc = tree_.num_colors;
  const int m = static_cast<int>(h_.strat.size()) - 1;
  std::int64_t q2 = ceil_div(tree_.n, h_.t[2]);
  const std::int64_t bit_budget = 16 * q2 * q2;

  std::vector<int> slot_of(nc + 1, -1);
  std::vector<int> pos_of(nc + 1, -1);

  for (int k = 1; k <= m; ++k) {
    const Level& fine = *h_.strat[k];
    const Level& coarse = *h_.strat[k - 1];
    const int fli = ci_.strat_levels[k];
    const int nb = fine.part.count();

    StratTable st;
    st.nblocks = nb;
    int b = std::min(7, 2 * ceil_log2(ceil_div(coarse.factor, h_.t[2])));
    std::int64_t remaining = bit_budget - T.t5_bits;
    while (b > 0 &&
           static_cast<std::int64_t>(nb) * nb * (b + 1) > remaining)
      --b;
    st.bits = b;
    st.entry.assign(static_cast<std::size_t>(nb) * nb, 0xFF);
    T.t5_bits += static_cast<std::int64_t>(nb) * nb * (b + 1);

    std::vector<std::vector<int>> freps(tree_.n + 1);
    for (int p = 0; p < nb; ++p) freps[fine.part.rep[p]].push_back(p);

    for (int P = 0; P < nb; ++P) {
      int cb = coarse.part.block_of[fine.part.blocks[P].front()];
      const std::vector<int>& list = coarse.part.blocks[cb];
      const int len = static_cast<int>(list.size());
      const int shift = std::max(0, ceil_log2(len) - b);
      for (int idx = 0; idx < len; ++idx) {
        int c = tree_.color[list[idx]];
        if (pos_of[c] < 0) pos_of[c] = idx;
      }
      std::vector<int> allowed =
          color_difference(coarse.block_colors[cb], fine.block_colors[P]);
      const int ns = static_cast<int>(allowed.size());
      for (int s = 0; s < ns; ++s) slot_of[allowed[s]] = s;

      std::vector<std::int64_t> cnt(ns, 0), wsum(kind == GKind::Sum ? ns : 0, 0);
      std::vector<int> active, apos(ns, -1);
      auto value = [&](int s) -> std::int64_t {
        switch (kind) {
          case GKind::Mode: return cnt[s];
          case GKind::Lfe: return -cnt[s];
          default: return wsum[s];
        }
      };
      auto enter = [&](int v) {
        ++ops_;
        int s = slot_of[tree_.color[v]];
        if (s >= 0) {
          if (cnt[s]++ == 0) {
            apos[s] = static_cast<int>(active.size());
            active.push_back(s);
          }
          if (kind == GKind::Sum) wsum[s] += tree_.weight[v];
        }
        for (int Q : freps[v]) {
          if (Q == P) continue;
          bool found = false;
          std::int64_t bv = 0;
          int bc = 0;
          for (int as : active) {
            ++ops_;
            int c = allowed[as];
            if (ci_.contains(c, Q, fli)) continue;
            std::int64_t val = value(as);
            if (!found || val > bv || (val == bv && c < bc)) {
              found = true;
              bv = val;
              bc = c;
            }
          }
          if (found) {
            assert(pos_of[bc] >= 0);
            st.entry[static_cast<std::size_t>(P) * nb + Q] =
                static_cast<std::uint8_t>(pos_of[bc] >> shift);
          }
        }
      };
      auto leave = [&](int v) {
        int s = slot_of[tree_.color[v]];
        if (s >= 0) {
          if (--cnt[s] == 0) {
            int last = active.back();
            active[apos[s]] = last;
            apos[last] = apos[s];
            active.pop_back();
            apos[s] = -1;
          }
          if (kind == GKind::Sum) wsum[s] -= tree_.weight[v];
        }
      };
      reroot_dfs(ix_, tree_.parent, fine.part.rep[P], enter, leave);
      assert(active.empty());
      for (int c : allowed) slot_of[c] = -1;
      for (int node : list) pos_of[tree_.color[node]] = -1;
    }
    T.t5.push_back(std::move(st));
  }
}

}  // namespace pathfreq
