#include "pathfreq/gvalue.hpp"

#include <cassert>

namespace pathfreq {

namespace {

struct ModeG final : GFunction {
  const VirtualForest* vf;
  explicit ModeG(const VirtualForest& v) : vf(&v) {}
  std::int64_t eval_contracted(int l, int r) const override {
    return vf->freq_contracted(l, r);
  }
  const char* name() const override { return "mode"; }
};

struct LfeG final : GFunction {
  const VirtualForest* vf;
  explicit LfeG(const VirtualForest& v) : vf(&v) {}
  std::int64_t eval_contracted(int l, int r) const override {
    return -static_cast<std::int64_t>(vf->freq_contracted(l, r));
  }
  const char* name() const override { return "lfe"; }
};

struct SumG final : GFunction {
  const VirtualForest* vf;
  explicit SumG(const VirtualForest& v) : vf(&v) { assert(v.tree->has_weights); }
  std::int64_t eval_contracted(int l, int r) const override {
    return vf->sum_contracted(l, r);
  }
  const char* name() const override { return "maxsum"; }
  bool needs_weights() const override { return true; }
};

}  // namespace

std::unique_ptr<GFunction> make_mode_g(const VirtualForest& vf) {
  return std::make_unique<ModeG>(vf);
}
std::unique_ptr<GFunction> make_lfe_g(const VirtualForest& vf) {
  return std::make_unique<LfeG>(vf);
}
std::unique_ptr<GFunction> make_sum_g(const VirtualForest& vf) {
  return std::make_unique<SumG>(vf);
}

}  // namespace pathfreq
