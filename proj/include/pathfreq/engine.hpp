#pragma once

#include <cstdint>
#include <vector>

#include "pathfreq/blocking.hpp"
#include "pathfreq/color_index.hpp"
#include "pathfreq/tree.hpp"
#include "pathfreq/virtual_forest.hpp"

namespace pathfreq {

// The three shipped g-functions.  All are maximized; LFE stores the negated
// frequency so the common argmax machinery applies, and the public wrapper
// reports the positive frequency.
enum class GKind { Mode = 0, Lfe = 1, Sum = 2 };

struct Triple {
  int color;
  int l, r;  // extremal occurrences of the color on the query path
};

struct CandidateSets {
  std::vector<int> s1;     // colors needing the slow (colored-ancestor) verification
  std::vector<Triple> s2;  // triples evaluated in O(1) via contracted endpoints
};

struct QueryResult {
  int color = 0;
  std::int64_t value = 0;  // raw g-value (negative frequency for LFE)
  int l = 0, r = 0;        // contracted endpoints of the winning color
};

// One stratified table: dense over ordered pairs of same-level blocks; the
// entry is the truncated position (top `bits` bits) of an occurrence of the
// class-optimal color inside the node list of the source block's parent
// stratum block.  0xFF = empty class.
struct StratTable {
  int bits = 0;
  int nblocks = 0;
  std::vector<std::uint8_t> entry;
};

struct SubtaskTables {
  bool built = false;
  // global table: (t3-block, t3-block) -> color, -1 = NONE
  std::vector<std::int32_t> t1;
  // ascent tables: entry = relative t1-block index, 0xFF = NONE
  std::vector<std::uint8_t> t2;  // (t2-block, t3-block), index into B3's t1 list
  std::vector<std::uint8_t> t3;  // (t1-block, t3-block), index into B2's t1 list
  std::vector<StratTable> t5;    // stratum k = 1..m at position k-1
  std::int64_t t5_bits = 0;      // sum over strata of entries * (bits + 1)
};

struct EngineOptions {
  std::int64_t t1 = 0;  // 0 = default from n and word_size
  int word_size = 64;
  std::uint64_t seed = 1;
  bool fallback = false;  // diagnostic: exhaustive block scans instead of strata
};

struct EngineStats {
  std::int64_t factor[5] = {0, 0, 0, 0, 0};
  int level_blocks[5] = {0, 0, 0, 0, 0};
  int level_marked[5] = {0, 0, 0, 0, 0};
  int strat_count = 0;
  int nb1 = 0, nb2 = 0, nb3 = 0;
  std::int64_t t5_bits = 0, t5_bit_budget = 0;
  std::uint64_t ops = 0;
};

// Query engine: owns the tree and every derived structure.  Precomputation is
// lazy per g-function; queries over built tables are pure and thread-safe.
class Engine {
 public:
  explicit Engine(ColoredTree tree, EngineOptions opt = {});
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  QueryResult query_max_gvalue(int i, int j, GKind kind);
  QueryResult query_mode(int i, int j);            // value = frequency
  QueryResult query_least_frequent(int i, int j);  // value = positive frequency
  QueryResult query_max_sum(int i, int j);         // value = weight sum

  CandidateSets run_subtasks(int i, int j, GKind kind);
  // reference class computation: result[k] = sorted colors of class k (1..10)
  std::vector<std::vector<int>> decompose_colors(int i, int j) const;

  void ensure_tables(GKind kind);
  const SubtaskTables& tables(GKind kind) const { return tabs_[static_cast<int>(kind)]; }

  const ColoredTree& tree() const { return tree_; }
  const TreeIndex& index() const { return ix_; }
  const VirtualForest& forest() const { return vf_; }
  const BlockHierarchy& hierarchy() const { return h_; }
  const ColorIndex& colors() const { return ci_; }
  const EngineOptions& options() const { return opt_; }
  std::uint64_t op_count() const { return ops_; }
  EngineStats stats() const;

  std::int64_t eval_pair(int l, int r, GKind kind) const;

 private:
  void build_t1(GKind kind);
  void build_t2(GKind kind);
  void build_t3(GKind kind);
  void build_t5(GKind kind);

  ColoredTree tree_;
  SimpleTree st_;
  TreeIndex ix_;
  VirtualForest vf_;
  BlockHierarchy h_;
  ColorIndex ci_;
  EngineOptions opt_;
  SubtaskTables tabs_[3];
  std::uint64_t ops_ = 0;

  std::vector<std::vector<int>> sub13_;  // t3 block -> its t1 blocks in order
  std::vector<int> rel13_;               // t1 block -> index in sub13_ of its t3 block
  std::vector<std::vector<int>> reps3_at_;  // node -> t3 blocks with this representative
};

}  // namespace pathfreq
