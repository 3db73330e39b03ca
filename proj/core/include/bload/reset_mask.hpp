#pragma once

#include <vector>

#include "bload/packing.hpp"

namespace bload {

// Per-frame control masks for one block. reset[t] marks the first frame of
// each constituent sequence; valid[t] distinguishes real frames from the
// pad tail. A recurrent trainer clears carried state where reset is set
// and skips frames where valid is not.
struct FrameMasks {
  std::vector<bool> reset;
  std::vector<bool> valid;
};

// Derived from the block alone: reset at every entry offset, valid on
// [0, capacity - pad_frames). reset[0] is always set. Throws PlanError on
// an invalid block.
FrameMasks build_masks(const Block& block);

}  // namespace bload
