#include "bload/ddp_sim.hpp"

#include <algorithm>

#include "bload/errors.hpp"
#include "bload/rng.hpp"

namespace bload {

RankAssignment assign_to_ranks(const std::vector<WorkUnit>& units, std::int64_t world_size,
                               std::int64_t batch_size, std::uint64_t seed) {
  if (world_size < 1 || batch_size < 1) {
    throw InfeasibleError("world_size and batch_size must be >= 1");
  }
  if (units.empty()) {
    throw InfeasibleError("no work units");
  }
  const std::int64_t per_round = world_size * batch_size;
  const std::int64_t rounds = static_cast<std::int64_t>(units.size()) / per_round;
  if (rounds == 0) {
    throw InfeasibleError("no complete round: " + std::to_string(units.size()) + " units, need " +
                          std::to_string(per_round));
  }

  std::vector<WorkUnit> shuffled = units;
  SeededRng rng(seed);
  rng.shuffle(shuffled);

  RankAssignment assignment;
  assignment.world_size = world_size;
  assignment.batch_size = batch_size;
  assignment.batches.assign(static_cast<std::size_t>(world_size), {});
  for (auto& queue : assignment.batches) {
    queue.reserve(static_cast<std::size_t>(rounds));
  }

  std::size_t cursor = 0;
  for (std::int64_t round = 0; round < rounds; ++round) {
    for (std::int64_t rank = 0; rank < world_size; ++rank) {
      std::vector<WorkUnit> batch(shuffled.begin() + cursor,
                                  shuffled.begin() + cursor + batch_size);
      cursor += static_cast<std::size_t>(batch_size);
      assignment.batches[static_cast<std::size_t>(rank)].push_back(std::move(batch));
    }
  }
  assignment.dropped_units = static_cast<std::int64_t>(units.size()) - rounds * per_round;
  return assignment;
}

StepTrace simulate_epoch(const RankAssignment& assignment, double cost_per_frame) {
  StepTrace trace;
  trace.world_size = assignment.world_size;
  trace.batch_size = assignment.batch_size;

  const std::int64_t rounds = assignment.rounds();
  std::vector<std::int64_t> all_ranks(static_cast<std::size_t>(assignment.world_size));
  for (std::int64_t r = 0; r < assignment.world_size; ++r) {
    all_ranks[static_cast<std::size_t>(r)] = r + 1;
  }

  std::int64_t synced_iterations = 0;
  for (std::int64_t round = 0; round < rounds; ++round) {
    std::vector<std::int64_t> demands(static_cast<std::size_t>(assignment.world_size), 0);
    for (std::int64_t rank = 0; rank < assignment.world_size; ++rank) {
      const auto& batch = assignment.batches[static_cast<std::size_t>(rank)][static_cast<std::size_t>(round)];
      std::int64_t longest = 0;
      for (const auto& unit : batch) {
        longest = std::max(longest, unit.length);
      }
      demands[static_cast<std::size_t>(rank)] = longest;
    }
    trace.round_iterations.push_back(demands);

    const std::int64_t shortest = *std::min_element(demands.begin(), demands.end());
    const std::int64_t longest = *std::max_element(demands.begin(), demands.end());
    for (std::int64_t iteration = 1; iteration <= shortest; ++iteration) {
      trace.sync_events.push_back({round, iteration, all_ranks});
    }
    synced_iterations += shortest;

    if (shortest != longest) {
      // Some rank ran out of gradients mid-round: the sync at shortest + 1
      // never completes and the epoch hangs.
      DeadlockInfo deadlock;
      deadlock.round = round;
      deadlock.iteration = shortest + 1;
      for (std::int64_t rank = 0; rank < assignment.world_size; ++rank) {
        if (demands[static_cast<std::size_t>(rank)] == shortest) {
          deadlock.exhausted_ranks.push_back(rank + 1);
        } else {
          deadlock.stalled_ranks.push_back(rank + 1);
        }
      }
      trace.deadlock = std::move(deadlock);
      break;
    }
  }
  trace.simulated_time = static_cast<double>(synced_iterations) * cost_per_frame;
  return trace;
}

std::vector<WorkUnit> units_from_plan(const PackingPlan& plan) {
  validate_plan(plan);
  std::vector<WorkUnit> units;
  units.reserve(plan.blocks.size());
  for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
    units.push_back({"block-" + std::to_string(i), plan.capacity, static_cast<std::int64_t>(i)});
  }
  return units;
}

std::vector<WorkUnit> units_from_manifest(const Manifest& manifest) {
  std::vector<WorkUnit> units;
  units.reserve(manifest.size());
  for (const auto& record : manifest.records) {
    units.push_back({record.id, record.frames, -1});
  }
  return units;
}

double epoch_time_estimate(const PackingPlan& plan, std::int64_t world_size,
                           double cost_per_frame) {
  if (world_size < 1) {
    throw InfeasibleError("world_size must be >= 1");
  }
  if (cost_per_frame <= 0.0) {
    throw InfeasibleError("cost_per_frame must be > 0");
  }
  const std::int64_t blocks = static_cast<std::int64_t>(plan.blocks.size());
  const std::int64_t rounds = (blocks + world_size - 1) / world_size;
  return static_cast<double>(rounds) * static_cast<double>(plan.capacity) * cost_per_frame;
}

}  // namespace bload
