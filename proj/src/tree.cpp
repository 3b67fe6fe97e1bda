#include "pathfreq/tree.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace pathfreq {

namespace {

// Splits text into lines; trailing '\r' stripped so CRLF files parse too.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() && cur.back() == '\r') cur.pop_back();
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::int64_t> parse_ints(const std::string& line, std::size_t expect,
                                     const char* what) {
  std::vector<std::int64_t> out;
  std::istringstream iss(line);
  std::int64_t v;
  while (iss >> v) out.push_back(v);
  std::string rest;
  if (iss.clear(), iss >> rest)
    throw FormatError(std::string("non-integer token in ") + what);
  if (out.size() != expect)
    throw FormatError(std::string(what) + ": expected " + std::to_string(expect) +
                      " integers, got " + std::to_string(out.size()));
  return out;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace

ColoredTree parse_tree(const std::string& text) {
  auto lines = split_lines(text);
  // drop trailing blank lines
  while (!lines.empty() && blank(lines.back())) lines.pop_back();
  if (lines.empty()) throw FormatError("empty tree file");

  auto nv = parse_ints(lines[0], 1, "node count line");
  if (nv[0] < 1) throw FormatError("node count must be >= 1");
  if (nv[0] > 50'000'000) throw FormatError("node count unreasonably large");
  const int n = static_cast<int>(nv[0]);

  if (lines.size() < 3) throw FormatError("tree file needs at least 3 lines");

  ColoredTree t;
  t.n = n;
  t.parent.assign(n + 1, 0);
  if (n > 1) {
    auto ps = parse_ints(lines[1], static_cast<std::size_t>(n - 1), "parent line");
    for (int v = 2; v <= n; ++v) {
      std::int64_t p = ps[v - 2];
      if (p < 1 || p > n) throw FormatError("parent index out of range for node " + std::to_string(v));
      if (p == v) throw FormatError("node " + std::to_string(v) + " is its own parent");
      t.parent[v] = static_cast<int>(p);
    }
  } else if (!blank(lines[1])) {
    throw FormatError("parent line must be empty when n == 1");
  }

  // Forward references are allowed as long as the parent pointers form a tree
  // rooted at 1: every node must reach 1 without revisiting a node.
  {
    std::vector<int> state(n + 1, 0);  // 0 unseen, 1 on current walk, 2 ok
    state[1] = 2;
    std::vector<int> walk;
    for (int v = 2; v <= n; ++v) {
      walk.clear();
      int x = v;
      while (state[x] == 0) {
        state[x] = 1;
        walk.push_back(x);
        x = t.parent[x];
      }
      if (state[x] == 1) throw FormatError("parent pointers contain a cycle");
      for (int y : walk) state[y] = 2;
    }
  }

  auto cs = parse_ints(lines[2], static_cast<std::size_t>(n), "color line");
  // sort-based normalization, smallest original label becomes color 1
  std::vector<std::int64_t> sorted(cs);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  t.num_colors = static_cast<int>(sorted.size());
  t.color_remap.assign(t.num_colors + 1, 0);
  for (int k = 0; k < t.num_colors; ++k) t.color_remap[k + 1] = sorted[k];
  t.color.assign(n + 1, 0);
  for (int v = 1; v <= n; ++v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), cs[v - 1]);
    t.color[v] = static_cast<int>(it - sorted.begin()) + 1;
  }

  std::size_t line_idx = 3;
  while (line_idx < lines.size() && blank(lines[line_idx])) ++line_idx;
  if (line_idx < lines.size()) {
    auto ws = parse_ints(lines[line_idx], static_cast<std::size_t>(n), "weight line");
    ++line_idx;
    while (line_idx < lines.size() && blank(lines[line_idx])) ++line_idx;
    if (line_idx < lines.size()) throw FormatError("unexpected extra line in tree file");
    t.has_weights = true;
    t.weight.assign(n + 1, 0);
    // keep per-path sums well inside int64: |w| * n <= 2^40
    const std::int64_t cap = (1ll << 40) / n;
    for (int v = 1; v <= n; ++v) {
      if (ws[v - 1] > cap || ws[v - 1] < -cap)
        throw FormatError("weight magnitude exceeds 2^40 / n for node " + std::to_string(v));
      t.weight[v] = ws[v - 1];
    }
  }
  return t;
}

std::string format_tree(const ColoredTree& t) {
  std::ostringstream os;
  os << t.n << '\n';
  for (int v = 2; v <= t.n; ++v) os << t.parent[v] << (v == t.n ? "" : " ");
  os << '\n';
  for (int v = 1; v <= t.n; ++v)
    os << t.color_remap[t.color[v]] << (v == t.n ? "" : " ");
  os << '\n';
  if (t.has_weights) {
    for (int v = 1; v <= t.n; ++v) os << t.weight[v] << (v == t.n ? "" : " ");
    os << '\n';
  }
  return os.str();
}

TreeIndex build_index(const SimpleTree& t) {
  TreeIndex ix;
  ix.n = t.n;
  ix.tree = &t;
  const int n = t.n;
  ix.depth.assign(n + 1, 0);
  ix.subtree.assign(n + 1, 1);
  ix.tin.assign(n + 1, 0);
  ix.tout.assign(n + 1, 0);
  ix.preorder.assign(n, 0);

  // children CSR
  ix.child_off.assign(n + 2, 0);
  for (int v = 2; v <= n; ++v) ++ix.child_off[t.parent[v] + 1];
  for (int v = 1; v <= n + 1; ++v) ix.child_off[v] += ix.child_off[v - 1];
  ix.child_dat.assign(std::max(0, n - 1), 0);
  {
    std::vector<int> fill(ix.child_off.begin(), ix.child_off.end() - 1);
    for (int v = 2; v <= n; ++v) ix.child_dat[fill[t.parent[v]]++] = v;
  }

  // iterative DFS: preorder, depth, Euler intervals, tour
  ix.tour.reserve(2 * n - 1);
  ix.tour_pos.assign(n + 1, -1);
  std::vector<std::pair<int, int>> stack;  // (node, next child slot)
  stack.reserve(64);
  stack.emplace_back(1, ix.child_off[1]);
  int timer = 0;
  ix.tin[1] = timer;
  ix.preorder[timer++] = 1;
  ix.tour_pos[1] = static_cast<int>(ix.tour.size());
  ix.tour.push_back(1);
  while (!stack.empty()) {
    auto& [u, slot] = stack.back();
    if (slot < ix.child_off[u + 1]) {
      int c = ix.child_dat[slot++];
      ix.depth[c] = ix.depth[u] + 1;
      ix.tin[c] = timer;
      ix.preorder[timer++] = c;
      ix.tour_pos[c] = static_cast<int>(ix.tour.size());
      ix.tour.push_back(c);
      stack.emplace_back(c, ix.child_off[c]);
    } else {
      ix.tout[u] = timer;
      stack.pop_back();
      if (!stack.empty()) {
        int p = stack.back().first;
        ix.subtree[p] += ix.subtree[u];
        ix.tour.push_back(p);
      }
    }
  }

  // sparse table over the tour (argmin by depth)
  const int m = static_cast<int>(ix.tour.size());
  const int levels = std::max(1, ceil_log2(static_cast<std::uint64_t>(m)) + 1);
  ix.sparse.assign(levels, {});
  ix.sparse[0] = ix.tour;
  for (int k = 1; k < levels; ++k) {
    int len = m - (1 << k) + 1;
    if (len <= 0) break;
    ix.sparse[k].assign(len, 0);
    for (int i = 0; i < len; ++i) {
      int a = ix.sparse[k - 1][i], b = ix.sparse[k - 1][i + (1 << (k - 1))];
      ix.sparse[k][i] = ix.depth[a] <= ix.depth[b] ? a : b;
    }
  }

  // binary lifting for level ancestors
  int lg = std::max(1, ceil_log2(static_cast<std::uint64_t>(n + 1)));
  ix.up.assign(lg, std::vector<int>(n + 1, 0));
  ix.up[0] = t.parent;
  for (int k = 1; k < lg; ++k)
    for (int v = 1; v <= n; ++v) ix.up[k][v] = ix.up[k - 1][ix.up[k - 1][v]];
  return ix;
}

int TreeIndex::lca(int u, int v) const {
  int a = tour_pos[u], b = tour_pos[v];
  if (a > b) std::swap(a, b);
  ++b;
  int k = 31 - __builtin_clz(static_cast<unsigned>(b - a));
  int x = sparse[k][a], y = sparse[k][b - (1 << k)];
  return depth[x] <= depth[y] ? x : y;
}

int TreeIndex::level_ancestor(int u, int k) const {
  assert(k >= 0 && k <= depth[u]);
  for (int b = 0; k; ++b, k >>= 1)
    if (k & 1) u = up[b][u];
  return u;
}

int TreeIndex::kth_on_path(int i, int j, int d) const {
  int w = lca(i, j);
  int di = depth[i] - depth[w];
  int dj = depth[j] - depth[w];
  if (d < 0 || d > di + dj) throw QueryError("path offset out of range");
  if (d <= di) return level_ancestor(i, d);
  return level_ancestor(j, di + dj - d);
}

}  // namespace pathfreq
