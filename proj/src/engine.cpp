#include "pathfreq/engine.hpp"

#include <algorithm>
#include <cassert>

namespace pathfreq {

Engine::Engine(ColoredTree tree, EngineOptions opt)
    : tree_(std::move(tree)),
      st_(tree_.structure()),
      ix_(build_index(st_)),
      vf_(build_virtual_forest(tree_, ix_)),
      h_(compute_hierarchy(tree_, ix_,
                           opt.t1 > 0 ? opt.t1 : default_t1(tree_.n, opt.word_size))),
      ci_(build_color_index(tree_, ix_, h_, vf_)),
      opt_(opt) {
  const Level& l3 = *h_.level[3];
  sub13_.assign(l3.part.count(), {});
  rel13_.assign(h_.level[1]->part.count(), -1);
  for (int b3 = 0; b3 < l3.part.count(); ++b3)
    for (int b2 : h_.btree[2].subs[b3])
      for (int b1 : h_.btree[1].subs[b2]) {
        rel13_[b1] = static_cast<int>(sub13_[b3].size());
        sub13_[b3].push_back(b1);
      }
  reps3_at_.assign(tree_.n + 1, {});
  for (int b = 0; b < l3.part.count(); ++b) reps3_at_[l3.part.rep[b]].push_back(b);
}

std::int64_t Engine::eval_pair(int l, int r, GKind kind) const {
  switch (kind) {
    case GKind::Mode: return vf_.freq_contracted(l, r);
    case GKind::Lfe: return -static_cast<std::int64_t>(vf_.freq_contracted(l, r));
    default: return vf_.sum_contracted(l, r);
  }
}

void Engine::ensure_tables(GKind kind) {
  SubtaskTables& T = tabs_[static_cast<int>(kind)];
  if (T.built) return;
  build_t1(kind);
  build_t2(kind);
  build_t3(kind);
  build_t5(kind);
  T.built = true;
}

CandidateSets Engine::run_subtasks(int i, int j, GKind kind) {
  ix_.check_node(i);
  ix_.check_node(j);
  ensure_tables(kind);
  const SubtaskTables& T = tabs_[static_cast<int>(kind)];
  const Level& l1 = *h_.level[1];
  const Level& l2 = *h_.level[2];
  const Level& l3 = *h_.level[3];
  const int nb3 = l3.part.count();
  int b1i = l1.part.block_of[i], b1j = l1.part.block_of[j];
  int b2i = l2.part.block_of[i], b2j = l2.part.block_of[j];
  int b3i = l3.part.block_of[i], b3j = l3.part.block_of[j];

  CandidateSets cs;
  auto add_block_colors = [&](const std::vector<int>& colors) {
    cs.s1.insert(cs.s1.end(), colors.begin(), colors.end());
  };

  // subtask 1 (global)
  if (std::int32_t c = T.t1[static_cast<std::size_t>(b3i) * nb3 + b3j]; c >= 0)
    cs.s1.push_back(c);
  // subtasks 2 and 4 (level-3 ascent, both orientations)
  if (std::uint8_t e = T.t2[static_cast<std::size_t>(b2i) * nb3 + b3j]; e != 0xFF)
    add_block_colors(l1.block_colors[sub13_[b3i][e]]);
  if (std::uint8_t e = T.t2[static_cast<std::size_t>(b2j) * nb3 + b3i]; e != 0xFF)
    add_block_colors(l1.block_colors[sub13_[b3j][e]]);
  // subtasks 3 and 7 (level-2 ascent)
  if (std::uint8_t e = T.t3[static_cast<std::size_t>(b1i) * nb3 + b3j]; e != 0xFF)
    add_block_colors(l1.block_colors[h_.btree[1].subs[b2i][e]]);
  if (std::uint8_t e = T.t3[static_cast<std::size_t>(b1j) * nb3 + b3i]; e != 0xFF)
    add_block_colors(l1.block_colors[h_.btree[1].subs[b2j][e]]);
  // subtask 10 (local)
  add_block_colors(l1.block_colors[b1i]);
  if (b1j != b1i) add_block_colors(l1.block_colors[b1j]);
  // anchor colors: when both endpoints land in one block (a leaf bin), the
  // path can escape the block only through its representative, whose color
  // the pair tables cannot see.  Adding every representative color on both
  // sides (all levels and strata) closes that case for O(1) extra candidates.
  for (int k = 1; k <= 3; ++k) {
    const BlockPartition& p = h_.level[k]->part;
    cs.s1.push_back(tree_.color[p.rep[p.block_of[i]]]);
    cs.s1.push_back(tree_.color[p.rep[p.block_of[j]]]);
  }
  for (const auto& lv : h_.strat) {
    const BlockPartition& p = lv->part;
    cs.s1.push_back(tree_.color[p.rep[p.block_of[i]]]);
    cs.s1.push_back(tree_.color[p.rep[p.block_of[j]]]);
  }

  auto add_triple = [&](int c) {
    auto ep = vf_.path_color_endpoints(i, j, c);
    if (ep) cs.s2.push_back({c, ep->first, ep->second});
  };

  if (opt_.fallback) {
    // diagnostic mode: exhaustive scans of the level-3 color lists
    for (int c : l3.block_colors[b3i]) add_triple(c);
    if (b3j != b3i)
      for (int c : l3.block_colors[b3j]) add_triple(c);
  } else {
    // subtask 5 (stratified intersection), both orientations per stratum
    std::vector<char> seen5(tree_.num_colors + 1, 0);
    const int m = static_cast<int>(h_.strat.size()) - 1;
    for (int k = 1; k <= m; ++k) {
      const StratTable& st = T.t5[k - 1];
      const Level& fine = *h_.strat[k];
      const Level& coarse = *h_.strat[k - 1];
      int fli = ci_.strat_levels[k];
      int p = fine.part.block_of[i], q = fine.part.block_of[j];
      if (p == q) continue;
      auto scan = [&](int src, int dst, int node_in_src) {
        std::uint8_t e = st.entry[static_cast<std::size_t>(src) * st.nblocks + dst];
        if (e == 0xFF) return;
        int cb = coarse.part.block_of[node_in_src];
        const std::vector<int>& list = coarse.part.blocks[cb];
        int len = static_cast<int>(list.size());
        int shift = std::max(0, ceil_log2(len) - st.bits);
        int lo = static_cast<int>(e) << shift;
        int hi = std::min(len, (static_cast<int>(e) + 1) << shift);
        for (int pos = lo; pos < hi; ++pos) {
          int c = tree_.color[list[pos]];
          if (seen5[c]) continue;
          seen5[c] = 1;
          if (ci_.contains(c, p, fli) || ci_.contains(c, q, fli)) continue;
          add_triple(c);
        }
      };
      scan(p, q, i);
      std::fill(seen5.begin(), seen5.end(), 0);
      scan(q, p, j);
      std::fill(seen5.begin(), seen5.end(), 0);
    }
    // subtask 6: c in C(B2(i)), class C6 filter
    for (int c : l2.block_colors[b2i])
      if (!ci_.contains_level(c, b1i, 1) && ci_.contains_level(c, b3j, 3) &&
          !ci_.contains_level(c, b2j, 2))
        add_triple(c);
    // subtask 8 (symmetric to 6)
    for (int c : l2.block_colors[b2j])
      if (!ci_.contains_level(c, b1j, 1) && ci_.contains_level(c, b3i, 3) &&
          !ci_.contains_level(c, b2i, 2))
        add_triple(c);
    // subtask 9: level-2 intersection
    for (int c : l2.block_colors[b2i])
      if (!ci_.contains_level(c, b1i, 1) && ci_.contains_level(c, b2j, 2) &&
          !ci_.contains_level(c, b1j, 1))
        add_triple(c);
  }
  return cs;
}

QueryResult Engine::query_max_gvalue(int i, int j, GKind kind) {
  ix_.check_node(i);
  ix_.check_node(j);
  if (kind == GKind::Sum && !tree_.has_weights)
    throw QueryError("max-sum query on a tree without weights");
  CandidateSets cs = run_subtasks(i, j, kind);

  QueryResult best;
  bool found = false;
  std::vector<char> seen(tree_.num_colors + 1, 0);
  auto consider = [&](int c, int l, int r) {
    std::int64_t v = eval_pair(l, r, kind);
    if (!found || v > best.value || (v == best.value && c < best.color)) {
      best = {c, v, l, r};
      found = true;
    }
  };
  for (int c : cs.s1) {
    if (seen[c]) continue;
    seen[c] = 1;
    auto ep = vf_.path_color_endpoints(i, j, c);
    if (ep) consider(c, ep->first, ep->second);
  }
  for (const Triple& t : cs.s2) {
    if (seen[t.color]) continue;
    seen[t.color] = 1;
    consider(t.color, t.l, t.r);
  }
  assert(found && "color(i) is always a verified candidate");
  return best;
}

QueryResult Engine::query_mode(int i, int j) { return query_max_gvalue(i, j, GKind::Mode); }

QueryResult Engine::query_least_frequent(int i, int j) {
  QueryResult r = query_max_gvalue(i, j, GKind::Lfe);
  r.value = -r.value;  // report the positive frequency
  return r;
}

QueryResult Engine::query_max_sum(int i, int j) { return query_max_gvalue(i, j, GKind::Sum); }

std::vector<std::vector<int>> Engine::decompose_colors(int i, int j) const {
  ix_.check_node(i);
  ix_.check_node(j);
  // explicit path walk (reference computation, not the fast path)
  std::vector<char> seen(tree_.num_colors + 1, 0);
  std::vector<int> colors;
  int a = i, b = j;
  auto visit = [&](int v) {
    if (!seen[tree_.color[v]]) {
      seen[tree_.color[v]] = 1;
      colors.push_back(tree_.color[v]);
    }
  };
  while (a != b) {
    if (ix_.depth[a] >= ix_.depth[b]) {
      visit(a);
      a = tree_.parent[a];
    } else {
      visit(b);
      b = tree_.parent[b];
    }
  }
  visit(a);
  std::sort(colors.begin(), colors.end());

  const Level& l1 = *h_.level[1];
  const Level& l2 = *h_.level[2];
  const Level& l3 = *h_.level[3];
  int b1i = l1.part.block_of[i], b1j = l1.part.block_of[j];
  int b2i = l2.part.block_of[i], b2j = l2.part.block_of[j];
  int b3i = l3.part.block_of[i], b3j = l3.part.block_of[j];

  std::vector<std::vector<int>> out(11);
  for (int c : colors) {
    if (ci_.contains_level(c, b1i, 1) || ci_.contains_level(c, b1j, 1)) {
      out[10].push_back(c);
      continue;
    }
    bool pi = ci_.contains_level(c, b3i, 3), qi = ci_.contains_level(c, b2i, 2);
    bool pj = ci_.contains_level(c, b3j, 3), qj = ci_.contains_level(c, b2j, 2);
    int k;
    if (qi)
      k = qj ? 9 : (pj ? 6 : 3);
    else if (pi)
      k = qj ? 8 : (pj ? 5 : 2);
    else
      k = qj ? 7 : (pj ? 4 : 1);
    out[k].push_back(c);
  }
  return out;
}

EngineStats Engine::stats() const {
  EngineStats s;
  for (int k = 1; k <= 4; ++k) {
    s.factor[k] = h_.t[k];
    s.level_blocks[k] = h_.level[k]->part.count();
    s.level_marked[k] = static_cast<int>(h_.level[k]->members.size());
  }
  s.strat_count = static_cast<int>(h_.strat.size()) - 1;
  s.nb1 = h_.level[1]->part.count();
  s.nb2 = h_.level[2]->part.count();
  s.nb3 = h_.level[3]->part.count();
  for (const auto& T : tabs_)
    if (T.built) s.t5_bits = std::max(s.t5_bits, T.t5_bits);
  std::int64_t q = ceil_div(tree_.n, h_.t[2]);
  s.t5_bit_budget = 16 * q * q;
  s.ops = ops_;
  return s;
}

}  // namespace pathfreq
