#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "pathfreq/virtual_forest.hpp"

namespace pathfreq {

// Pluggable path-color scoring function.  All instances satisfy the framework
// contract: the value of a color on a path depends only on the contracted
// endpoints (the two extremal occurrences of the color on the path), and
// eval_contracted is O(1) apart from one virtual-LCA lookup.
//
// - mode: frequency (maximize)
// - lfe:  negated frequency (maximizing finds the least frequent element)
// - sum:  sum of node weights over the color's path occurrences
struct GFunction {
  virtual ~GFunction() = default;
  virtual std::int64_t eval_contracted(int l, int r) const = 0;
  virtual const char* name() const = 0;
  virtual bool needs_weights() const { return false; }
};

std::unique_ptr<GFunction> make_mode_g(const VirtualForest& vf);
std::unique_ptr<GFunction> make_lfe_g(const VirtualForest& vf);
std::unique_ptr<GFunction> make_sum_g(const VirtualForest& vf);  // requires weights

}  // namespace pathfreq
