#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bload/manifest.hpp"

namespace bload {

enum class Strategy { naive, chunks, mixed, bload };

std::string_view to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(std::string_view name);

// Placement of one sequence slice inside a block. source_start is 0 unless
// the strategy chunks or trims; block_offset is the slice's first frame
// within the block.
struct BlockEntry {
  std::string sequence_id;
  std::int64_t source_start = 0;
  std::int64_t length = 0;
  std::int64_t block_offset = 0;

  bool operator==(const BlockEntry&) const = default;
};

// Fixed-capacity container: contiguous entries from offset 0, then
// pad_frames of filler. Always exactly full: sum(lengths) + pad == capacity.
// Entries are never empty (no all-pad blocks).
struct Block {
  std::vector<BlockEntry> entries;
  std::int64_t capacity = 0;
  std::int64_t pad_frames = 0;

  std::int64_t used_frames() const { return capacity - pad_frames; }

  bool operator==(const Block&) const = default;
};

struct PackingPlan {
  Strategy strategy = Strategy::naive;
  std::int64_t capacity = 0;
  std::uint64_t seed = 0;  // 0 for the unseeded strategies
  std::vector<Block> blocks;

  bool operator==(const PackingPlan&) const = default;
};

struct PackingMetrics {
  std::int64_t padding_frames = 0;
  std::int64_t frames_deleted = 0;
  std::int64_t block_count = 0;
  std::int64_t processed_frames = 0;  // block_count * capacity
  double utilization = 0.0;           // 1 - padding / processed
};

struct StartEntry {
  std::int64_t block_offset = 0;
  std::string sequence_id;

  bool operator==(const StartEntry&) const = default;
};

// Per block, the offset at which each constituent sequence begins. Drives
// recurrent-state resets during training.
struct StartIndexTable {
  std::vector<std::vector<StartEntry>> blocks;
};

// One block per sequence, padded to the longest length in the manifest.
// Nothing is deleted. Throws ManifestError on an empty manifest.
PackingPlan pack_naive(const Manifest& manifest);

// Splits every sequence into floor(T / t_block) chunks of exactly t_block
// frames and drops the remainder; sequences shorter than t_block are
// dropped whole. Zero padding. Throws InfeasibleError when nothing packs.
PackingPlan pack_chunks(const Manifest& manifest, std::int64_t t_block);

// One block per sequence at capacity t_mix: longer sequences keep their
// first t_mix frames, shorter ones are padded up.
PackingPlan pack_mixed(const Manifest& manifest, std::int64_t t_mix);

// Greedy block construction: while unplaced sequences remain, open a block
// of t_max frames and repeatedly draw uniformly at random among the
// unplaced sequences that still fit; when none fits, pad the tail and move
// on. Sequences are never split, nothing is deleted, and the result is a
// pure function of (manifest, t_max, seed). Throws InfeasibleError if any
// sequence exceeds t_max.
PackingPlan pack_bload(const Manifest& manifest, std::int64_t t_max, std::uint64_t seed);

// Exact accounting for a plan against the manifest it was packed from.
// Throws PlanError on dangling ids or out-of-range slices.
PackingMetrics compute_metrics(const PackingPlan& plan, const Manifest& manifest);

StartIndexTable start_index_table(const PackingPlan& plan);

// Checks every block invariant (shared capacity, contiguity from offset 0,
// exact fullness, non-empty entries). Throws PlanError on violation.
void validate_plan(const PackingPlan& plan);

}  // namespace bload
