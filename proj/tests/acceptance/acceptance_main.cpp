// Acceptance gate: one criterion per invocation (--criterion N), each printing
// a single "criterion N: PASS" / "criterion N: FAIL (reason)" line.  Criteria
// follow the project contract: differential oracle equivalence, structural
// invariants, randomized-algorithm statistics, size accounting, build cost,
// and CLI determinism.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pathfreq/engine.hpp"
#include "pathfreq/generator.hpp"
#include "pathfreq/minority.hpp"
#include "pathfreq/oracle.hpp"

using namespace pathfreq;

namespace {

std::string g_cli;  // path to the pathfreq binary (criterion 11)
std::string g_fail;

bool expect(bool ok, const std::string& why) {
  if (!ok && g_fail.empty()) g_fail = why;
  return ok;
}

ColoredTree t7() {
  return parse_tree("7\n1 1 2 2 3 3\n1 2 1 2 3 1 3\n5 1 2 1 7 3 2\n");
}

const std::vector<TreeShape> kShapes = {TreeShape::Random, TreeShape::Path,
                                        TreeShape::Star, TreeShape::Caterpillar};

// ---------------------------------------------------------------- criterion 1
bool crit_gmax_equivalence() {
  SplitMix64 rng(0xC1);
  for (int n : {1, 2, 7, 50, 500, 5000}) {
    std::vector<int> colorset = {1, 3, static_cast<int>(ceil_sqrt(n)), n};
    for (TreeShape shape : kShapes) {
      for (int nc : colorset) {
        ColoredTree t = n == 7 ? t7() : generate_tree(n, shape, nc, true, rng.next());
        oracle::Oracle orc(t);
        Engine eng(ColoredTree(t), {});
        for (int q = 0; q < 1000; ++q) {
          int i = 1 + static_cast<int>(rng.below(n));
          int j = 1 + static_cast<int>(rng.below(n));
          for (int k = 0; k < 3; ++k) {
            auto r = eng.query_max_gvalue(i, j, static_cast<GKind>(k));
            auto o = orc.gmax(i, j, static_cast<oracle::GKind>(k));
            std::int64_t got = k == 1 ? -r.value : r.value;
            if (!expect(got == o.value,
                        "gmax mismatch n=" + std::to_string(n) + " i=" +
                            std::to_string(i) + " j=" + std::to_string(j) +
                            " kind=" + std::to_string(k)))
              return false;
          }
        }
        if (n == 7) break;  // the fixture replaces the generated grid entry
      }
      if (n == 7) break;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 2
bool crit_fixture_goldens() {
  ColoredTree t = t7();
  oracle::Oracle orc(t);
  auto om = orc.gmax(4, 6, oracle::GKind::Mode);
  auto ol = orc.gmax(4, 6, oracle::GKind::Lfe);
  auto os = orc.gmax(4, 6, oracle::GKind::Sum);
  expect(om.color == 1 && om.value == 3, "oracle mode(4,6)");
  expect(ol.color == 2 && ol.value == 2, "oracle lfe(4,6)");
  expect(os.color == 1 && os.value == 10, "oracle maxsum(4,6)");
  Engine eng(t7(), {});
  auto m = eng.query_mode(4, 6);
  auto l = eng.query_least_frequent(4, 6);
  auto s = eng.query_max_sum(4, 6);
  expect(m.color == 1 && m.value == 3, "engine mode(4,6)");
  expect(l.color == 2 && l.value == 2, "engine lfe(4,6)");
  expect(s.color == 1 && s.value == 10, "engine maxsum(4,6)");
  return g_fail.empty();
}

// ---------------------------------------------------------------- criterion 3
bool crit_blocking_invariants() {
  {
    ColoredTree p6 = parse_tree("6\n1 2 3 4 5\n1 2 3 4 5 6\n");
    TreeIndex ix = build_index(p6.structure());
    MarkedSet ms = compute_marked(p6.parent, ix, 2);
    expect(ms.members == std::vector<int>{1, 3, 5}, "path golden marks");
    BlockPartition bp = compute_partition(p6.parent, ix, ms);
    std::vector<std::vector<int>> blocks = bp.blocks;
    std::sort(blocks.begin(), blocks.end());
    expect(blocks == std::vector<std::vector<int>>{{1}, {2, 3}, {4, 5}, {6}},
           "path golden blocks");
  }
  SplitMix64 rng(0xC3);
  for (int n : {10, 100, 1000, 5000}) {
    for (TreeShape shape : kShapes) {
      ColoredTree t = generate_tree(n, shape, 3, false, rng.next());
      TreeIndex ix = build_index(t.structure());
      for (std::int64_t f : {std::int64_t{1}, std::int64_t{2}, ceil_sqrt(n),
                             std::int64_t{std::max(1, n / 4)}, std::int64_t{n}}) {
        MarkedSet ms = compute_marked(t.parent, ix, f);
        std::string err = check_marked_set(t.parent, ix, ms);
        if (!expect(err.empty(), "marked set n=" + std::to_string(n) + " t=" +
                                     std::to_string(f) + ": " + err))
          return false;
        BlockPartition bp = compute_partition(t.parent, ix, ms);
        err = check_partition(t.parent, ix, ms, bp);
        if (!expect(err.empty(), "partition n=" + std::to_string(n) + " t=" +
                                     std::to_string(f) + ": " + err))
          return false;
      }
    }
  }
  return g_fail.empty();
}

// ---------------------------------------------------------------- criterion 4
bool crit_decomposition() {
  SplitMix64 rng(0xC4);
  int done = 0;
  for (int n : {50, 500}) {
    for (TreeShape shape : kShapes) {
      for (int nc : {3, static_cast<int>(ceil_sqrt(n)), n}) {
        ColoredTree t = generate_tree(n, shape, nc, false, rng.next());
        Engine eng(std::move(t), {});
        oracle::Oracle orc(eng.tree());
        for (int q = 0; q < 50; ++q, ++done) {
          int i = 1 + static_cast<int>(rng.below(n));
          int j = 1 + static_cast<int>(rng.below(n));
          auto classes = eng.decompose_colors(i, j);
          std::vector<int> all;
          for (int k = 1; k <= 10; ++k)
            all.insert(all.end(), classes[k].begin(), classes[k].end());
          std::sort(all.begin(), all.end());
          if (!expect(std::adjacent_find(all.begin(), all.end()) == all.end(),
                      "classes overlap"))
            return false;
          std::vector<int> want;
          for (auto& [c, f] : orc.view(i, j).freq)
            if (f > 0) want.push_back(c);
          if (!expect(all == want, "class union differs from the path color set"))
            return false;
        }
      }
    }
  }
  return expect(done >= 1000, "too few decomposition queries");
}

// ---------------------------------------------------------------- criterion 5
bool crit_first_occurrence() {
  SplitMix64 rng(0xC5);
  int checked = 0;
  while (checked < 10000) {
    int n = 30 + static_cast<int>(rng.below(800));
    TreeShape shape = kShapes[rng.below(kShapes.size())];
    int nc = 2 + static_cast<int>(rng.below(12));
    ColoredTree t = generate_tree(n, shape, nc, false, rng.next());
    TreeIndex ix = build_index(t.structure());
    VirtualForest vf = build_virtual_forest(t, ix);
    BlockHierarchy h = compute_hierarchy(t, ix, default_t1(n, 64));
    ColorIndex ci = build_color_index(t, ix, h, vf);
    oracle::Oracle orc(t);
    for (int q = 0; q < 2000 && checked < 10000; ++q) {
      int i = 1 + static_cast<int>(rng.below(n));
      int j = 1 + static_cast<int>(rng.below(n));
      int c = 1 + static_cast<int>(rng.below(t.num_colors));
      int k = 2 + static_cast<int>(rng.below(3));
      if (!ci.contains_level(c, h.block_of(i, k), k)) continue;
      if (ci.contains_level(c, h.block_of(i, k - 1), k - 1)) continue;
      if (orc.frequency(i, j, c) == 0) continue;
      int got = ci.first_occurrence_on_path(i, j, k, c);
      int want = 0;
      for (int v : orc.path_nodes(i, j))
        if (t.color[v] == c) {
          want = v;
          break;
        }
      if (!expect(got == want, "first occurrence mismatch n=" + std::to_string(n) +
                                   " i=" + std::to_string(i) + " j=" + std::to_string(j) +
                                   " c=" + std::to_string(c) + " k=" + std::to_string(k)))
        return false;
      ++checked;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 6
bool crit_monte_carlo() {
  SplitMix64 rng(0xC6);
  long long trials = 0, successes = 0, det_trials = 0, det_fail = 0;
  while (trials < 20000) {
    int n = 20 + static_cast<int>(rng.below(400));
    TreeShape shape = kShapes[rng.below(kShapes.size())];
    int nc = 2 + static_cast<int>(rng.below(16));
    ColoredTree t = generate_tree(n, shape, nc, false, rng.next());
    TreeIndex ix = build_index(t.structure());
    VirtualForest vf = build_virtual_forest(t, ix);
    MinorityIndex mi(t, ix, vf);
    oracle::Oracle orc(t);
    for (int q = 0; q < 400 && trials < 20000; ++q) {
      int i = 1 + static_cast<int>(rng.below(n));
      int j = 1 + static_cast<int>(rng.below(n));
      double alpha = 0.05 + 0.9 * rng.unit();
      auto truth = orc.minorities(i, j, alpha);
      if (truth.empty()) continue;
      ++trials;
      auto mc = mi.monte_carlo(i, j, alpha, rng);
      bool ok = mc.found && std::binary_search(truth.begin(), truth.end(), mc.color);
      if (ok) ++successes;
      int w = ix.lca(i, j);
      auto side_distinct = [&](int u) {
        std::vector<int> cs;
        for (int v = u;; v = t.parent[v]) {
          cs.push_back(t.color[v]);
          if (v == w) break;
        }
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        return static_cast<int>(cs.size());
      };
      int cap = 2 * static_cast<int>(std::ceil(2.0 / alpha));
      if (side_distinct(i) <= cap && side_distinct(j) <= cap) {
        ++det_trials;
        if (!ok) ++det_fail;
      }
    }
  }
  double rate = static_cast<double>(successes) / static_cast<double>(trials);
  // one-sided 99% binomial test of H0: p >= 1/2 (normal approximation)
  double z99_bound = 0.5 * static_cast<double>(trials) -
                     2.3263 * 0.5 * std::sqrt(static_cast<double>(trials));
  expect(rate >= 0.5, "success rate " + std::to_string(rate) + " < 0.5");
  expect(static_cast<double>(successes) >= z99_bound, "binomial test rejects p >= 1/2");
  expect(det_fail == 0, "deterministic-regime failures: " + std::to_string(det_fail) +
                            "/" + std::to_string(det_trials));
  std::printf("  [mc] trials=%lld successes=%lld rate=%.4f det=%lld\n", trials,
              successes, rate, det_trials);
  return g_fail.empty();
}

// ---------------------------------------------------------------- criterion 7
bool crit_las_vegas() {
  SplitMix64 rng(0xC7);
  long long cases = 0, found = 0, verifications = 0;
  while (cases < 10000) {
    int n = 10 + static_cast<int>(rng.below(500));
    TreeShape shape = kShapes[rng.below(kShapes.size())];
    int nc = 1 + static_cast<int>(rng.below(20));
    ColoredTree t = generate_tree(n, shape, nc, false, rng.next());
    TreeIndex ix = build_index(t.structure());
    VirtualForest vf = build_virtual_forest(t, ix);
    MinorityIndex mi(t, ix, vf);
    oracle::Oracle orc(t);
    for (int q = 0; q < 250 && cases < 10000; ++q, ++cases) {
      int i = 1 + static_cast<int>(rng.below(n));
      int j = 1 + static_cast<int>(rng.below(n));
      double alpha = 0.05 + 0.9 * rng.unit();
      auto truth = orc.minorities(i, j, alpha);
      auto lv = mi.las_vegas(i, j, alpha, rng);
      if (!expect(lv.found == !truth.empty(), "las vegas found/none mismatch"))
        return false;
      if (lv.found) {
        if (!expect(std::binary_search(truth.begin(), truth.end(), lv.color) &&
                        lv.freq == orc.frequency(i, j, lv.color),
                    "las vegas returned a non-minority"))
          return false;
        ++found;
        verifications += lv.verifications;
      }
    }
  }
  double mean = static_cast<double>(verifications) / static_cast<double>(found);
  expect(mean <= 2.5, "mean verifications " + std::to_string(mean) + " > 2.5");
  std::printf("  [lv] cases=%lld found=%lld mean_verifications=%.3f\n", cases, found,
              mean);
  return g_fail.empty();
}

// ---------------------------------------------------------------- criterion 8
bool crit_sum_identity() {
  SplitMix64 rng(0xC8);
  int checked = 0;
  while (checked < 10000) {
    int n = 10 + static_cast<int>(rng.below(600));
    TreeShape shape = kShapes[rng.below(kShapes.size())];
    ColoredTree t = generate_tree(n, shape, 5, true, rng.next());
    TreeIndex ix = build_index(t.structure());
    VirtualForest vf = build_virtual_forest(t, ix);
    oracle::Oracle orc(t);
    for (int q = 0; q < 1000 && checked < 10000; ++q) {
      int i = 1 + static_cast<int>(rng.below(n));
      int j = 1 + static_cast<int>(rng.below(n));
      int c = 1 + static_cast<int>(rng.below(t.num_colors));
      auto ep = vf.path_color_endpoints(i, j, c);
      if (!ep) continue;
      std::int64_t naive = 0;
      for (int v : orc.path_nodes(i, j))
        if (t.color[v] == c) naive += t.weight[v];
      if (!expect(vf.sum_contracted(ep->first, ep->second) == naive,
                  "prefix-sum identity mismatch"))
        return false;
      ++checked;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 9
bool crit_table_dimensions() {
  SplitMix64 rng(0xC9);
  for (int n : {100, 1000, 5000}) {
    for (TreeShape shape : {TreeShape::Random, TreeShape::Path}) {
      ColoredTree t = generate_tree(n, shape, 8, false, rng.next());
      Engine eng(std::move(t), {});
      eng.ensure_tables(GKind::Mode);
      EngineStats s = eng.stats();
      const SubtaskTables& T = eng.tables(GKind::Mode);
      expect(T.t1.size() == static_cast<std::size_t>(s.nb3) * s.nb3, "T1 dimensions");
      expect(T.t2.size() == static_cast<std::size_t>(s.nb2) * s.nb3, "T2 dimensions");
      expect(T.t3.size() == static_cast<std::size_t>(s.nb1) * s.nb3, "T3 dimensions");
      double budget = 16.0 * (static_cast<double>(n) / static_cast<double>(s.factor[2])) *
                      (static_cast<double>(n) / static_cast<double>(s.factor[2]));
      expect(static_cast<double>(s.t5_bits) <= budget + 16.0 * 2 *
                                                   static_cast<double>(n) /
                                                   static_cast<double>(s.factor[2]),
             "T5 bits " + std::to_string(s.t5_bits) + " over budget n=" +
                 std::to_string(n));
      if (!g_fail.empty()) return false;
    }
  }
  return true;
}

// --------------------------------------------------------------- criterion 10
bool crit_build_cost() {
  SplitMix64 rng(0xCA);
  {
    const int n = 5000;
    ColoredTree t = generate_tree(n, TreeShape::Random, 25, true, rng.next());
    Engine eng(std::move(t), {});
    eng.ensure_tables(GKind::Mode);
    eng.ensure_tables(GKind::Lfe);
    eng.ensure_tables(GKind::Sum);
    EngineStats s = eng.stats();
    const std::int64_t kC = 64;  // documented constant, all three builds included
    std::int64_t budget = kC * static_cast<std::int64_t>(n) * ceil_div(n, s.factor[2]);
    expect(static_cast<std::int64_t>(s.ops) <= budget,
           "ops " + std::to_string(s.ops) + " > " + std::to_string(budget));
    std::printf("  [ops] n=5000 ops=%llu budget=%lld\n",
                static_cast<unsigned long long>(s.ops),
                static_cast<long long>(budget));
  }
  {
    const int n = 100000;
    ColoredTree t = generate_tree(n, TreeShape::Random, 1000, true, rng.next());
    auto start = std::chrono::steady_clock::now();
    Engine eng(std::move(t), {});
    eng.ensure_tables(GKind::Mode);
    eng.ensure_tables(GKind::Lfe);
    eng.ensure_tables(GKind::Sum);
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                     .count();
    expect(sec < 600.0, "n=1e5 build took " + std::to_string(sec) + "s");
    std::printf("  [build] n=100000 %.1fs\n", sec);
  }
  return g_fail.empty();
}

// --------------------------------------------------------------- criterion 11
bool crit_cli_determinism() {
  namespace fs = std::filesystem;
  if (g_cli.empty()) return expect(false, "--cli not provided");
  fs::path dir = fs::temp_directory_path() / "pathfreq_accept";
  fs::create_directories(dir);
  fs::path tree = dir / "tree.txt", queries = dir / "q.txt";
  fs::path out1 = dir / "o1.txt", out2 = dir / "o2.txt";

  auto run = [&](const std::string& cmd) { return std::system(cmd.c_str()); };
  if (!expect(run(g_cli + " gen --n 400 --colors 12 --shape random --weights --seed 5 --out " +
                  tree.string()) == 0,
              "gen failed"))
    return false;

  SplitMix64 rng(0xCB);
  std::ofstream q(queries);
  for (int k = 0; k < 200; ++k) {
    int i = 1 + static_cast<int>(rng.below(400));
    int j = 1 + static_cast<int>(rng.below(400));
    switch (k % 5) {
      case 0: q << "MODE " << i << " " << j << "\n"; break;
      case 1: q << "LFE " << i << " " << j << "\n"; break;
      case 2: q << "MAXSUM " << i << " " << j << "\n"; break;
      case 3: q << "MINORITY " << i << " " << j << " 0.3 mc\n"; break;
      default: q << "MINORITY " << i << " " << j << " 0.6 lv\n"; break;
    }
  }
  q.close();

  std::string base = g_cli + " query --tree " + tree.string() + " --queries " +
                     queries.string() + " --seed 99 > ";
  if (!expect(run(base + out1.string()) == 0, "first query run failed")) return false;
  if (!expect(run(base + out2.string()) == 0, "second query run failed")) return false;

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp(out1), b = slurp(out2);
  expect(!a.empty(), "empty CLI output");
  expect(a == b, "outputs differ between identically-seeded runs");
  // and the verifier agrees with the oracle on this script
  expect(run(g_cli + " verify --tree " + tree.string() + " --queries " +
             queries.string() + " --seed 99 > " + (dir / "v.txt").string()) == 0,
         "verify reported a mismatch");
  return g_fail.empty();
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  for (int a = 1; a < argc; ++a) {
    std::string s = argv[a];
    if (s == "--criterion" && a + 1 < argc) criterion = std::atoi(argv[++a]);
    if (s == "--cli" && a + 1 < argc) g_cli = argv[++a];
  }
  if (criterion < 1 || criterion > 11) {
    std::fprintf(stderr, "usage: acceptance --criterion 1..11 [--cli PATH]\n");
    return 2;
  }
  bool ok = false;
  switch (criterion) {
    case 1: ok = crit_gmax_equivalence(); break;
    case 2: ok = crit_fixture_goldens(); break;
    case 3: ok = crit_blocking_invariants(); break;
    case 4: ok = crit_decomposition(); break;
    case 5: ok = crit_first_occurrence(); break;
    case 6: ok = crit_monte_carlo(); break;
    case 7: ok = crit_las_vegas(); break;
    case 8: ok = crit_sum_identity(); break;
    case 9: ok = crit_table_dimensions(); break;
    case 10: ok = crit_build_cost(); break;
    case 11: ok = crit_cli_determinism(); break;
  }
  if (ok) {
    std::printf("criterion %d: PASS\n", criterion);
    return 0;
  }
  std::printf("criterion %d: FAIL (%s)\n", criterion, g_fail.c_str());
  return 1;
}
