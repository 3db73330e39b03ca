#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bload/manifest.hpp"
#include "bload/packing.hpp"

namespace bload {

// One batch slot's worth of work for a rank: a raw sequence or a packed
// block. length is the number of frame iterations it costs.
struct WorkUnit {
  std::string unit_id;
  std::int64_t length = 0;
  std::int64_t block_index = -1;  // source block for plan-driven runs, else -1

  bool operator==(const WorkUnit&) const = default;
};

// Per-rank work queues. Ranks are numbered 1..world_size. Every rank holds
// the same number of complete batch_size-unit batches; trailing units that
// cannot fill a complete round across all ranks are dropped and counted,
// so an epoch never ends with some ranks holding work that others lack.
struct RankAssignment {
  std::int64_t world_size = 1;
  std::int64_t batch_size = 1;
  std::vector<std::vector<std::vector<WorkUnit>>> batches;  // [rank-1][round]
  std::int64_t dropped_units = 0;

  std::int64_t rounds() const {
    return batches.empty() ? 0 : static_cast<std::int64_t>(batches.front().size());
  }
};

struct SyncEvent {
  std::int64_t round = 0;
  std::int64_t iteration = 0;  // 1-based within the round
  std::vector<std::int64_t> ranks;
};

struct DeadlockInfo {
  std::int64_t round = 0;
  std::int64_t iteration = 0;                  // first iteration some rank cannot join
  std::vector<std::int64_t> stalled_ranks;     // still have work, waiting on the sync
  std::vector<std::int64_t> exhausted_ranks;   // finished their batch earlier

  bool operator==(const DeadlockInfo&) const = default;
};

// Record of one simulated epoch. round_iterations[round][rank-1] is the
// number of frame iterations that rank's batch demands in that round; a
// gradient sync at each iteration requires every rank, so unequal demands
// within a round deadlock the epoch at the first iteration past the
// shortest rank. simulated_time counts only iterations whose sync
// completed, scaled by the per-frame cost.
struct StepTrace {
  std::int64_t world_size = 1;
  std::int64_t batch_size = 1;
  std::vector<std::vector<std::int64_t>> round_iterations;
  std::vector<SyncEvent> sync_events;
  std::optional<DeadlockInfo> deadlock;
  double simulated_time = 0.0;
};

// Seeded shuffle of the units, then batch_size-unit groups dealt
// round-robin to ranks; only complete rounds are kept (dropped units are
// counted in the result). Throws InfeasibleError when fewer than
// world_size * batch_size units arrive.
RankAssignment assign_to_ranks(const std::vector<WorkUnit>& units, std::int64_t world_size,
                               std::int64_t batch_size, std::uint64_t seed);

// Deterministic lockstep interpretation of the assignment. Deadlock is a
// result, not an error: the trace flags it and the epoch halts there.
StepTrace simulate_epoch(const RankAssignment& assignment, double cost_per_frame = 1.0);

// Units for plan-driven simulation: one unit per block, costing the full
// block capacity (ranks pay for padded frames too).
std::vector<WorkUnit> units_from_plan(const PackingPlan& plan);

// Units for raw-manifest simulation: one unit per sequence at its true length.
std::vector<WorkUnit> units_from_manifest(const Manifest& manifest);

// Frames-processed time model: ceil(block_count / world_size) rounds, each
// costing capacity * cost_per_frame on every synchronous rank.
double epoch_time_estimate(const PackingPlan& plan, std::int64_t world_size,
                           double cost_per_frame);

}  // namespace bload
