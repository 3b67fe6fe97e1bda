#pragma once

#include <cstdint>
#include <vector>

#include "pathfreq/tree.hpp"
#include "pathfreq/util.hpp"
#include "pathfreq/virtual_forest.hpp"

namespace pathfreq {

// k-nearest distinct ancestor queries: the k distinct colors closest to u on
// the path to the root (lowest occurrence per color), optionally restricted
// to depth >= min_depth.  Backed by a persistent treap keyed by depth: the
// version at u holds, for every distinct color on the root-to-u path, the
// depth of its lowest occurrence.  One insert and at most one erase per node.
class DistinctAncestorIndex {
 public:
  DistinctAncestorIndex(const ColoredTree& tree, const TreeIndex& ix,
                        const VirtualForest& vf);

  // (node, color) pairs in order of increasing distance from u, at most k,
  // only occurrences with depth[node] >= min_depth.
  std::vector<std::pair<int, int>> nearest(int u, int k, int min_depth) const;

 private:
  struct Node {
    int key;
    std::uint32_t prio;
    std::int32_t l, r;
  };

  std::int32_t copy(std::int32_t t);
  void split(std::int32_t t, int key, std::int32_t& a, std::int32_t& b);
  std::int32_t merge(std::int32_t a, std::int32_t b);
  std::int32_t insert(std::int32_t t, int key, std::uint32_t prio);
  std::int32_t erase(std::int32_t t, int key);

  const ColoredTree* tree_;
  const TreeIndex* ix_;
  std::vector<Node> pool_;
  std::vector<std::int32_t> root_at_;  // per node; -1 = empty
};

struct MinorityResult {
  bool found = false;
  int color = 0;             // normalized color
  std::int64_t freq = 0;     // exact path frequency of `color`
  int verifications = 0;     // phase-4 frequency checks (Las Vegas)
};

// Randomized path alpha-minority queries (4-phase candidate algorithm).
class MinorityIndex {
 public:
  MinorityIndex(const ColoredTree& tree, const TreeIndex& ix, const VirtualForest& vf);

  // Monte Carlo: unverified sample from the candidate set; correct with
  // probability >= 1/2, and deterministically when both path sides carry at
  // most the collected number of distinct colors.
  MinorityResult monte_carlo(int i, int j, double alpha, SplitMix64& rng) const;
  // Las Vegas: verified; reports a true alpha-minority iff one exists.
  MinorityResult las_vegas(int i, int j, double alpha, SplitMix64& rng) const;

 private:
  struct Candidate {
    int color;
    int node;  // lowest occurrence on its side
  };
  struct Phases {
    bool answered = false;
    MinorityResult result;
    std::vector<Candidate> d;  // remaining candidates, sorted by color
    double threshold = 0;      // alpha * N
  };
  Phases run_phases(int i, int j, double alpha) const;
  std::int64_t exact_frequency(int i, int j, int c) const;

  const ColoredTree* tree_;
  const TreeIndex* ix_;
  const VirtualForest* vf_;
  DistinctAncestorIndex dai_;
};

}  // namespace pathfreq
