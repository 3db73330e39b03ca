#include "bload/reset_mask.hpp"

#include "bload/errors.hpp"

namespace bload {

FrameMasks build_masks(const Block& block) {
  if (block.entries.empty()) {
    throw PlanError("block has no entries");
  }
  const std::int64_t used = block.capacity - block.pad_frames;
  if (block.pad_frames < 0 || used < 1) {
    throw PlanError("block padding out of range");
  }
  FrameMasks masks;
  masks.reset.assign(static_cast<std::size_t>(block.capacity), false);
  masks.valid.assign(static_cast<std::size_t>(block.capacity), false);
  std::int64_t expected = 0;
  for (const auto& entry : block.entries) {
    if (entry.block_offset != expected || entry.length < 1) {
      throw PlanError("block entries are not contiguous");
    }
    masks.reset[static_cast<std::size_t>(entry.block_offset)] = true;
    expected += entry.length;
  }
  if (expected != used) {
    throw PlanError("block entries do not match capacity minus padding");
  }
  for (std::int64_t t = 0; t < used; ++t) {
    masks.valid[static_cast<std::size_t>(t)] = true;
  }
  return masks;
}

}  // namespace bload
