#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

namespace pathfreq {

// Tabulated operations on small rooted trees/forests (block trees), given as
// 0-based parent vectors with -1 for roots.  Results are memoized per
// canonical shape (parent sequence in DFS order): forests with matching
// encodings share table rows after index permutation.  Above the size cap the
// direct DFS is used; memoized answers always equal the direct computation.
class SmallTreeTables {
 public:
  static constexpr int kCap = 16;

  // Lowest sigma-marked ancestor-or-self of u; when none exists on the root
  // path, the smallest-indexed marked node without a marked proper ancestor.
  // Returns -1 iff sigma is all-zero.
  int lma(const std::vector<int>& parent, std::uint32_t sigma, int u);

  // Bitstring psi: psi(w)=1 iff sigma_v(w)=0 and the first sigma_e-marked
  // edge on the path from w toward its root is e.  Edges are identified by
  // their child node index.  Requires sigma_e(e)=1.
  std::uint32_t reachable_subset(const std::vector<int>& parent, std::uint32_t sigma_v,
                                 std::uint32_t sigma_e, int e);

  static int lma_direct(const std::vector<int>& parent, std::uint32_t sigma, int u);
  static std::uint32_t reachable_subset_direct(const std::vector<int>& parent,
                                               std::uint32_t sigma_v,
                                               std::uint32_t sigma_e, int e);

  std::size_t memo_entries() const { return lma_memo_.size() + subset_memo_.size(); }

 private:
  struct Canon {
    int id = -1;                 // interned shape id, -1 when above the cap
    std::vector<int> perm;       // original index -> canonical index
    std::vector<int> inv;        // canonical index -> original index
  };
  const Canon& canonical(const std::vector<int>& parent);

  std::map<std::vector<int>, Canon> canon_cache_;
  std::map<std::vector<int>, int> shape_ids_;
  std::unordered_map<std::uint64_t, int> lma_memo_;
  std::unordered_map<std::uint64_t, std::uint32_t> subset_memo_;
};

}  // namespace pathfreq
