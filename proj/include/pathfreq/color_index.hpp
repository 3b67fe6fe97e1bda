#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pathfreq/blocking.hpp"
#include "pathfreq/small_trees.hpp"
#include "pathfreq/static_dict.hpp"
#include "pathfreq/tree.hpp"
#include "pathfreq/virtual_forest.hpp"

namespace pathfreq {

// Static dictionaries over the block hierarchy:
//   - presence masks for level pairs (1,2), (2,3), (3,4): (color, high block)
//     -> bitmask over its sub-blocks (null iff the color misses the block);
//   - topmost dictionaries (all hierarchy levels, stratification included):
//     (color, block) -> minimum-depth occurrence inside the block;
//   - edge-entry dictionaries per level pair: (color, block b) -> the deepest
//     occurrence on the path from rep(b) to the parent block's representative,
//     stored only when the color misses b itself;
//   - small-tree tabulation shared by block-tree operations.
struct ColorIndex {
  const ColoredTree* tree = nullptr;
  const TreeIndex* ix = nullptr;
  const BlockHierarchy* h = nullptr;
  const VirtualForest* vf = nullptr;

  // distinct levels: index 0..3 = hierarchy levels 1..4, then intermediates
  std::vector<std::shared_ptr<Level>> levels;
  int strat_index[5] = {0, 0, 1, 2, 3};      // hierarchy level k -> levels index
  std::vector<int> strat_levels;             // per strat position -> levels index

  std::vector<U64Dict> topmost;              // per levels index; value = node
  U64Dict pres[4];                           // pairs k=1..3: (c, high blk) -> mask id
  std::vector<SmallBitset> pres_masks[4];
  U64Dict edge[4];                           // pairs k=1..3: (c, low blk) -> node
  std::size_t edge_entries[4] = {0, 0, 0, 0};
  mutable SmallTreeTables small;

  static std::uint64_t key(int c, int b) {
    return (static_cast<std::uint64_t>(c) << 32) | static_cast<std::uint32_t>(b + 1);
  }

  // c present in block b of level `li` (index into `levels`)?
  bool contains(int c, int b, int li) const {
    return topmost[li].get(key(c, b)) != 0xffffffffu;
  }
  bool contains_level(int c, int b, int k) const {  // hierarchy level k = 1..4
    return contains(c, b, strat_index[k]);
  }
  std::optional<int> topmost_node(int c, int b, int li) const {
    std::uint32_t v = topmost[li].get(key(c, b));
    if (v == 0xffffffffu) return std::nullopt;
    return static_cast<int>(v);
  }
  // mask over sub-blocks of high block hb at pair k (low level k, high k+1)
  const SmallBitset* color_mask(int k, int c, int hb) const {
    std::uint32_t id = pres[k].get(key(c, hb));
    return id == 0xffffffffu ? nullptr : &pres_masks[k][id];
  }
  std::optional<int> edge_entry(int k, int c, int b) const {
    std::uint32_t v = edge[k].get(key(c, b));
    if (v == 0xffffffffu) return std::nullopt;
    return static_cast<int>(v);
  }

  // First occurrence of c on P(i, j) counted from i, for level pair (k, k-1),
  // k in 2..4.  Precondition: c in C(B_k(i)) and c not in C(B_{k-1}(i)).
  int first_occurrence_on_path(int i, int j, int k, int c) const;
};

ColorIndex build_color_index(const ColoredTree& tree, const TreeIndex& ix,
                             const BlockHierarchy& h, const VirtualForest& vf);

}  // namespace pathfreq
