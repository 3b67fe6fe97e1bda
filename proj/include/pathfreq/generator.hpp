#pragma once

#include <cstdint>
#include <string>

#include "pathfreq/tree.hpp"

namespace pathfreq {

enum class TreeShape { Random, Path, Star, Caterpillar };

// Throws FormatError on an unknown name.
TreeShape parse_shape(const std::string& name);

// Deterministic for a fixed argument tuple.  Colors are drawn uniformly from
// 1..num_colors (clamped to [1, n]); weights, when requested, are signed and
// bounded so that any path sum fits comfortably in 64 bits.
ColoredTree generate_tree(int n, TreeShape shape, int num_colors, bool weights,
                          std::uint64_t seed);

}  // namespace pathfreq
