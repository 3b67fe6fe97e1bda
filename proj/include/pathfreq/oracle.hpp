#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pathfreq/tree.hpp"

namespace pathfreq {
namespace oracle {

// Brute-force reference implementations.  Everything here is deliberately
// independent of the fast structures: paths are found by walking parent
// pointers with depth comparison over a locally computed depth array.

enum class GKind { Mode, Lfe, Sum };

struct PathView {
  std::vector<int> nodes;                       // i .. j in order
  std::map<int, int> freq;                      // color -> occurrence count
  std::map<int, std::int64_t> weight_sum;       // color -> sum of weights
};

struct GBest {
  int color = 0;            // normalized color id (smallest among maxima)
  std::int64_t value = 0;   // g value (frequency / frequency / weight sum)
};

struct Oracle {
  const ColoredTree* tree;
  std::vector<int> depth;  // computed locally from parents

  explicit Oracle(const ColoredTree& t);

  std::vector<int> path_nodes(int i, int j) const;
  PathView view(int i, int j) const;

  GBest gmax(int i, int j, GKind kind) const;
  // all colors with frequency in [1, alpha * pathlen]
  std::vector<int> minorities(int i, int j, double alpha) const;
  std::optional<std::pair<int, int>> endpoints(int i, int j, int c) const;  // (l, r)
  int frequency(int i, int j, int c) const;
};

}  // namespace oracle
}  // namespace pathfreq
