#include "bload/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <vector>

#include "bload/errors.hpp"

namespace bload {

namespace {

std::vector<std::size_t> mask_positions(unsigned mask) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) {
      positions.push_back(i);
    }
  }
  return positions;
}

}  // namespace

OptimalResult optimal_packing(const Manifest& manifest, std::int64_t capacity) {
  if (manifest.empty()) {
    throw ManifestError("empty manifest");
  }
  const std::size_t n = manifest.size();
  if (static_cast<std::int64_t>(n) > kOracleMaxSequences) {
    throw InfeasibleError("instance too large for exhaustive search: " + std::to_string(n) +
                          " sequences, limit " + std::to_string(kOracleMaxSequences));
  }
  if (capacity < 1) {
    throw InfeasibleError("capacity must be >= 1");
  }
  std::int64_t total = 0;
  for (const auto& record : manifest.records) {
    if (record.frames > capacity) {
      throw InfeasibleError("sequence \"" + record.id + "\" has " + std::to_string(record.frames) +
                            " frames, exceeding capacity " + std::to_string(capacity));
    }
    total += record.frames;
  }

  const unsigned full = (1u << n) - 1u;
  std::vector<std::int64_t> sum(full + 1, 0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    const unsigned low = mask & (~mask + 1u);
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(mask));
    sum[mask] = sum[mask ^ low] + manifest.records[bit].frames;
  }

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 2;
  std::vector<std::int64_t> best(full + 1, kInf);
  best[0] = 0;
  for (unsigned mask = 1; mask <= full; ++mask) {
    // Fix the lowest set bit into the new block; every partition of mask
    // has some block containing it, so this enumeration is exhaustive.
    const unsigned anchor = mask & (~mask + 1u);
    const unsigned rest = mask ^ anchor;
    for (unsigned sub = rest;; sub = (sub - 1) & rest) {
      const unsigned block = sub | anchor;
      if (sum[block] <= capacity) {
        best[mask] = std::min(best[mask], 1 + best[mask ^ block]);
      }
      if (sub == 0) {
        break;
      }
    }
  }

  OptimalResult result;
  result.min_blocks = best[full];
  result.min_padding = result.min_blocks * capacity - total;

  // Canonical witness: peel blocks off greedily, always covering the
  // lowest unplaced position with the lexicographically least position set
  // among blocks that still reach the optimum.
  unsigned remaining = full;
  while (remaining != 0) {
    const unsigned anchor = remaining & (~remaining + 1u);
    const unsigned rest = remaining ^ anchor;
    std::vector<std::size_t> chosen;
    unsigned chosen_mask = 0;
    for (unsigned sub = rest;; sub = (sub - 1) & rest) {
      const unsigned block = sub | anchor;
      if (sum[block] <= capacity && 1 + best[remaining ^ block] == best[remaining]) {
        std::vector<std::size_t> positions = mask_positions(block);
        if (chosen_mask == 0 ||
            std::lexicographical_compare(positions.begin(), positions.end(), chosen.begin(),
                                         chosen.end())) {
          chosen = std::move(positions);
          chosen_mask = block;
        }
      }
      if (sub == 0) {
        break;
      }
    }
    Block block;
    block.capacity = capacity;
    std::int64_t offset = 0;
    for (const std::size_t pos : chosen) {
      const auto& record = manifest.records[pos];
      block.entries.push_back({record.id, 0, record.frames, offset});
      offset += record.frames;
    }
    block.pad_frames = capacity - offset;
    result.witness.push_back(std::move(block));
    remaining ^= chosen_mask;
  }
  return result;
}

}  // namespace bload
