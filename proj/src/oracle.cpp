#include "pathfreq/oracle.hpp"

#include <algorithm>

namespace pathfreq {
namespace oracle {

Oracle::Oracle(const ColoredTree& t) : tree(&t) {
  depth.assign(t.n + 1, -1);
  depth[1] = 0;
  // parents may reference later nodes, so resolve chains lazily
  std::vector<int> walk;
  for (int v = 2; v <= t.n; ++v) {
    walk.clear();
    int x = v;
    while (depth[x] < 0) {
      walk.push_back(x);
      x = t.parent[x];
    }
    for (auto it = walk.rbegin(); it != walk.rend(); ++it)
      depth[*it] = depth[t.parent[*it]] + 1;
  }
}

std::vector<int> Oracle::path_nodes(int i, int j) const {
  if (i < 1 || i > tree->n || j < 1 || j > tree->n)
    throw QueryError("oracle: node out of range");
  std::vector<int> from_i, from_j;
  int a = i, b = j;
  while (a != b) {
    if (depth[a] >= depth[b]) {
      from_i.push_back(a);
      a = tree->parent[a];
    } else {
      from_j.push_back(b);
      b = tree->parent[b];
    }
  }
  from_i.push_back(a);
  for (auto it = from_j.rbegin(); it != from_j.rend(); ++it) from_i.push_back(*it);
  return from_i;
}

PathView Oracle::view(int i, int j) const {
  PathView pv;
  pv.nodes = path_nodes(i, j);
  for (int v : pv.nodes) {
    ++pv.freq[tree->color[v]];
    if (tree->has_weights) pv.weight_sum[tree->color[v]] += tree->weight[v];
  }
  return pv;
}

GBest Oracle::gmax(int i, int j, GKind kind) const {
  PathView pv = view(i, j);
  GBest best;
  bool first = true;
  for (auto& [c, f] : pv.freq) {
    std::int64_t val = 0;
    switch (kind) {
      case GKind::Mode: val = f; break;
      case GKind::Lfe: val = -f; break;
      case GKind::Sum: val = pv.weight_sum.at(c); break;
    }
    if (first || val > best.value) {
      best.color = c;
      best.value = val;
      first = false;
    }
    // map iteration is ascending: ties keep the smallest color
  }
  if (kind == GKind::Lfe) best.value = -best.value;  // report positive frequency
  return best;
}

std::vector<int> Oracle::minorities(int i, int j, double alpha) const {
  PathView pv = view(i, j);
  double cap = alpha * static_cast<double>(pv.nodes.size());
  std::vector<int> out;
  for (auto& [c, f] : pv.freq)
    if (static_cast<double>(f) <= cap) out.push_back(c);
  return out;
}

std::optional<std::pair<int, int>> Oracle::endpoints(int i, int j, int c) const {
  auto nodes = path_nodes(i, j);
  int l = 0, r = 0;
  for (int v : nodes) {
    if (tree->color[v] == c) {
      if (!l) l = v;
      r = v;
    }
  }
  if (!l) return std::nullopt;
  return std::make_pair(l, r);
}

int Oracle::frequency(int i, int j, int c) const {
  auto nodes = path_nodes(i, j);
  int f = 0;
  for (int v : nodes) f += tree->color[v] == c;
  return f;
}

}  // namespace oracle
}  // namespace pathfreq
