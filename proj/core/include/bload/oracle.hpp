#pragma once

#include <cstdint>

#include "bload/manifest.hpp"
#include "bload/packing.hpp"

namespace bload {

// Exhaustive search bound: subset DP over 2^n states.
inline constexpr std::int64_t kOracleMaxSequences = 12;

// Exact minimum over all ways of partitioning whole sequences into blocks
// of the given capacity, plus one canonical witness packing.
struct OptimalResult {
  std::int64_t min_blocks = 0;
  std::int64_t min_padding = 0;  // min_blocks * capacity - total frames
  std::vector<Block> witness;
};

// Subset dynamic programming over all 2^n partitions (n <= 12). The
// witness is deterministic: among all minimum-block packings it is the
// lexicographically least when each block is written as its sorted list of
// record positions and blocks are ordered by first position. Throws
// InfeasibleError when the instance is too large or a sequence exceeds the
// capacity.
OptimalResult optimal_packing(const Manifest& manifest, std::int64_t capacity);

}  // namespace bload
