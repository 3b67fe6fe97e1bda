#include "pathfreq/generator.hpp"

#include <algorithm>

#include "pathfreq/util.hpp"

namespace pathfreq {

TreeShape parse_shape(const std::string& name) {
  if (name == "random") return TreeShape::Random;
  if (name == "path") return TreeShape::Path;
  if (name == "star") return TreeShape::Star;
  if (name == "caterpillar") return TreeShape::Caterpillar;
  throw FormatError("unknown shape: " + name);
}

ColoredTree generate_tree(int n, TreeShape shape, int num_colors, bool weights,
                          std::uint64_t seed) {
  if (n < 1) throw FormatError("n must be positive");
  SplitMix64 rng(seed);
  SplitMix64 struct_rng = rng.split();
  SplitMix64 color_rng = rng.split();
  SplitMix64 weight_rng = rng.split();

  ColoredTree t;
  t.n = n;
  t.parent.assign(n + 1, 0);
  for (int v = 2; v <= n; ++v) {
    switch (shape) {
      case TreeShape::Random:
        t.parent[v] = 1 + static_cast<int>(struct_rng.below(static_cast<std::uint64_t>(v - 1)));
        break;
      case TreeShape::Path: t.parent[v] = v - 1; break;
      case TreeShape::Star: t.parent[v] = 1; break;
      case TreeShape::Caterpillar:
        // odd nodes form the spine, even nodes hang off the previous spine node
        t.parent[v] = (v % 2 == 1) ? v - 2 : v - 1;
        break;
    }
  }

  int nc = std::clamp(num_colors, 1, n);
  t.color.assign(n + 1, 0);
  for (int v = 1; v <= n; ++v)
    t.color[v] = 1 + static_cast<int>(color_rng.below(static_cast<std::uint64_t>(nc)));

  t.has_weights = weights;
  if (weights) {
    // |w| <= 2^40 / n keeps any path sum within +-2^40
    std::uint64_t bound = (std::uint64_t{1} << 40) / static_cast<std::uint64_t>(n) + 1;
    t.weight.assign(n + 1, 0);
    for (int v = 1; v <= n; ++v) {
      std::int64_t mag = static_cast<std::int64_t>(weight_rng.below(bound));
      t.weight[v] = (weight_rng.next() & 1) ? -mag : mag;
    }
  }

  // normalize colors the same way the parser does
  std::vector<int> raw(t.color.begin() + 1, t.color.end());
  std::vector<int> distinct = raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  t.num_colors = static_cast<int>(distinct.size());
  t.color_remap.assign(t.num_colors + 1, 0);
  for (int k = 0; k < t.num_colors; ++k) t.color_remap[k + 1] = distinct[k];
  for (int v = 1; v <= n; ++v)
    t.color[v] = 1 + static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(),
                                                       t.color[v]) -
                                      distinct.begin());
  return t;
}

}  // namespace pathfreq
