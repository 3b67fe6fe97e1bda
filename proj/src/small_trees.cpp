#include "pathfreq/small_trees.hpp"

#include <algorithm>
#include <cassert>

namespace pathfreq {

namespace {

// fallback: smallest marked node without a marked proper ancestor.  This
// tie-break depends on the node labels, so it must always run on the caller's
// labeling, never on a canonical relabeling.
int topmost_marked(const std::vector<int>& parent, std::uint32_t sigma) {
  int m = static_cast<int>(parent.size());
  for (int v = 0; v < m; ++v) {
    if (!(sigma >> v & 1)) continue;
    bool topmost = true;
    for (int a = parent[v]; a != -1; a = parent[a])
      if (sigma >> a & 1) { topmost = false; break; }
    if (topmost) return v;
  }
  return -1;  // only when sigma == 0
}

}  // namespace

int SmallTreeTables::lma_direct(const std::vector<int>& parent, std::uint32_t sigma,
                                int u) {
  if (sigma == 0) return -1;
  for (int v = u; v != -1; v = parent[v])
    if (sigma >> v & 1) return v;
  return topmost_marked(parent, sigma);
}

std::uint32_t SmallTreeTables::reachable_subset_direct(const std::vector<int>& parent,
                                                       std::uint32_t sigma_v,
                                                       std::uint32_t sigma_e, int e) {
  std::uint32_t psi = 0;
  int m = static_cast<int>(parent.size());
  for (int w = 0; w < m; ++w) {
    if (sigma_v >> w & 1) continue;
    int first = -1;
    for (int v = w; parent[v] != -1; v = parent[v])
      if (sigma_e >> v & 1) { first = v; break; }
    if (first == e) psi |= 1u << w;
  }
  return psi;
}

const SmallTreeTables::Canon& SmallTreeTables::canonical(const std::vector<int>& parent) {
  auto it = canon_cache_.find(parent);
  if (it != canon_cache_.end()) return it->second;
  Canon c;
  int m = static_cast<int>(parent.size());
  if (m <= kCap) {
    // DFS order (roots ascending, children in original index order)
    std::vector<std::vector<int>> ch(m);
    std::vector<int> roots;
    for (int v = 0; v < m; ++v)
      (parent[v] == -1 ? roots : ch[parent[v]]).push_back(v);
    c.perm.assign(m, -1);
    c.inv.reserve(m);
    std::vector<int> cpar;
    std::vector<int> stack(roots.rbegin(), roots.rend());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      c.perm[v] = static_cast<int>(c.inv.size());
      c.inv.push_back(v);
      cpar.push_back(parent[v] == -1 ? -1 : c.perm[parent[v]]);
      for (auto rit = ch[v].rbegin(); rit != ch[v].rend(); ++rit) stack.push_back(*rit);
    }
    auto [sit, fresh] = shape_ids_.try_emplace(cpar, static_cast<int>(shape_ids_.size()));
    (void)fresh;
    c.id = sit->second;
  }
  return canon_cache_.emplace(parent, std::move(c)).first->second;
}

namespace {

std::uint32_t permute_bits(std::uint32_t bits, const std::vector<int>& perm) {
  std::uint32_t out = 0;
  for (std::size_t v = 0; v < perm.size(); ++v)
    if (bits >> v & 1) out |= 1u << perm[v];
  return out;
}

}  // namespace

int SmallTreeTables::lma(const std::vector<int>& parent, std::uint32_t sigma, int u) {
  const Canon& c = canonical(parent);
  if (c.id < 0) return lma_direct(parent, sigma, u);
  std::uint32_t cs = permute_bits(sigma, c.perm);
  std::uint64_t key = (static_cast<std::uint64_t>(c.id) << 21) |
                      (static_cast<std::uint64_t>(cs) << 5) |
                      static_cast<std::uint64_t>(c.perm[u]);
  auto it = lma_memo_.find(key);
  int ans;
  if (it != lma_memo_.end()) {
    ans = it->second;
  } else {
    // memoize only the marked-ancestor walk: ancestry is preserved by the
    // canonical relabeling, unlike the topmost-marked fallback tie-break
    std::vector<int> cpar(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v)
      cpar[c.perm[v]] = parent[v] == -1 ? -1 : c.perm[parent[v]];
    ans = -1;
    for (int v = c.perm[u]; v != -1; v = cpar[v])
      if (cs >> v & 1) { ans = v; break; }
    lma_memo_.emplace(key, ans);
  }
  if (ans >= 0) return c.inv[ans];
  if (sigma == 0) return -1;
  return topmost_marked(parent, sigma);
}

std::uint32_t SmallTreeTables::reachable_subset(const std::vector<int>& parent,
                                                std::uint32_t sigma_v,
                                                std::uint32_t sigma_e, int e) {
  const Canon& c = canonical(parent);
  if (c.id < 0) return reachable_subset_direct(parent, sigma_v, sigma_e, e);
  std::uint32_t csv = permute_bits(sigma_v, c.perm);
  std::uint32_t cse = permute_bits(sigma_e, c.perm);
  std::uint64_t key = (static_cast<std::uint64_t>(c.id) << 37) |
                      (static_cast<std::uint64_t>(csv) << 21) |
                      (static_cast<std::uint64_t>(cse) << 5) |
                      static_cast<std::uint64_t>(c.perm[e]);
  auto it = subset_memo_.find(key);
  std::uint32_t ans;
  if (it != subset_memo_.end()) {
    ans = it->second;
  } else {
    std::vector<int> cpar(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v)
      cpar[c.perm[v]] = parent[v] == -1 ? -1 : c.perm[parent[v]];
    ans = reachable_subset_direct(cpar, csv, cse, c.perm[e]);
    subset_memo_.emplace(key, ans);
  }
  assert(permute_bits(reachable_subset_direct(parent, sigma_v, sigma_e, e), c.perm) == ans);
  return permute_bits(ans, c.inv);
}

}  // namespace pathfreq
