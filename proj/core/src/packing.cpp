#include "bload/packing.hpp"

#include <algorithm>
#include <unordered_map>

#include "bload/errors.hpp"
#include "bload/rng.hpp"

namespace bload {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::naive:
      return "naive";
    case Strategy::chunks:
      return "chunks";
    case Strategy::mixed:
      return "mixed";
    case Strategy::bload:
      return "bload";
  }
  return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  if (name == "naive") return Strategy::naive;
  if (name == "chunks") return Strategy::chunks;
  if (name == "mixed") return Strategy::mixed;
  if (name == "bload") return Strategy::bload;
  return std::nullopt;
}

namespace {

void require_non_empty(const Manifest& manifest) {
  if (manifest.empty()) {
    throw ManifestError("empty manifest");
  }
}

Block single_entry_block(const SequenceRecord& record, std::int64_t taken, std::int64_t capacity) {
  Block block;
  block.capacity = capacity;
  block.pad_frames = capacity - taken;
  block.entries.push_back({record.id, 0, taken, 0});
  return block;
}

// Uniform draws over the unplaced sequences that still fit a remaining
// capacity. Lengths are rank-compressed and counted in a Fenwick tree, so
// each draw costs O(log n): pick the k-th alive sequence in length order,
// then swap-pop it out of its length bucket.
class FitPool {
 public:
  explicit FitPool(const Manifest& manifest) {
    lengths_.reserve(manifest.size());
    for (const auto& record : manifest.records) {
      lengths_.push_back(record.frames);
    }
    std::sort(lengths_.begin(), lengths_.end());
    lengths_.erase(std::unique(lengths_.begin(), lengths_.end()), lengths_.end());

    buckets_.resize(lengths_.size());
    tree_.assign(lengths_.size() + 1, 0);
    for (std::size_t i = 0; i < manifest.size(); ++i) {
      const std::size_t rank = rank_of(manifest.records[i].frames);
      buckets_[rank].push_back(i);
      add(rank + 1, 1);
    }
    alive_ = static_cast<std::int64_t>(manifest.size());
  }

  std::int64_t alive() const { return alive_; }

  // Number of unplaced sequences with length <= limit.
  std::int64_t eligible(std::int64_t limit) const {
    const auto it = std::upper_bound(lengths_.begin(), lengths_.end(), limit);
    return prefix(static_cast<std::size_t>(it - lengths_.begin()));
  }

  // Removes and returns the manifest index of the k-th (0-based, length
  // order) unplaced sequence. Requires k < alive().
  std::size_t take(std::int64_t k) {
    std::size_t pos = 0;
    std::int64_t rem = k + 1;
    std::size_t step = step_size();
    for (; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] < rem) {
        rem -= tree_[next];
        pos = next;
      }
    }
    const std::size_t rank = pos;  // 0-based rank of the matched length
    auto& bucket = buckets_[rank];
    const std::size_t slot = static_cast<std::size_t>(rem - 1);
    const std::size_t index = bucket[slot];
    bucket[slot] = bucket.back();
    bucket.pop_back();
    add(rank + 1, -1);
    --alive_;
    return index;
  }

 private:
  std::size_t step_size() const {
    std::size_t step = 1;
    while (step * 2 < tree_.size()) {
      step *= 2;
    }
    return step;
  }

  std::size_t rank_of(std::int64_t length) const {
    return static_cast<std::size_t>(
        std::lower_bound(lengths_.begin(), lengths_.end(), length) - lengths_.begin());
  }

  void add(std::size_t i, std::int64_t v) {
    for (; i < tree_.size(); i += i & (~i + 1)) {
      tree_[i] += v;
    }
  }

  std::int64_t prefix(std::size_t count) const {
    std::int64_t sum = 0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) {
      sum += tree_[i];
    }
    return sum;
  }

  std::vector<std::int64_t> lengths_;               // distinct, ascending
  std::vector<std::vector<std::size_t>> buckets_;   // alive manifest indices per length
  std::vector<std::int64_t> tree_;                  // 1-based Fenwick over bucket sizes
  std::int64_t alive_ = 0;
};

}  // namespace

PackingPlan pack_naive(const Manifest& manifest) {
  require_non_empty(manifest);
  const std::int64_t capacity = summarize(manifest).max_len;
  PackingPlan plan{Strategy::naive, capacity, 0, {}};
  plan.blocks.reserve(manifest.size());
  for (const auto& record : manifest.records) {
    plan.blocks.push_back(single_entry_block(record, record.frames, capacity));
  }
  return plan;
}

PackingPlan pack_chunks(const Manifest& manifest, std::int64_t t_block) {
  require_non_empty(manifest);
  if (t_block < 1) {
    throw InfeasibleError("t_block must be >= 1");
  }
  PackingPlan plan{Strategy::chunks, t_block, 0, {}};
  for (const auto& record : manifest.records) {
    const std::int64_t whole = record.frames / t_block;
    for (std::int64_t k = 0; k < whole; ++k) {
      Block block;
      block.capacity = t_block;
      block.pad_frames = 0;
      block.entries.push_back({record.id, k * t_block, t_block, 0});
      plan.blocks.push_back(std::move(block));
    }
  }
  if (plan.blocks.empty()) {
    throw InfeasibleError("no packable sequences: every sequence is shorter than t_block " +
                          std::to_string(t_block));
  }
  return plan;
}

PackingPlan pack_mixed(const Manifest& manifest, std::int64_t t_mix) {
  require_non_empty(manifest);
  if (t_mix < 1) {
    throw InfeasibleError("t_mix must be >= 1");
  }
  PackingPlan plan{Strategy::mixed, t_mix, 0, {}};
  plan.blocks.reserve(manifest.size());
  for (const auto& record : manifest.records) {
    plan.blocks.push_back(single_entry_block(record, std::min(record.frames, t_mix), t_mix));
  }
  return plan;
}

PackingPlan pack_bload(const Manifest& manifest, std::int64_t t_max, std::uint64_t seed) {
  require_non_empty(manifest);
  if (t_max < 1) {
    throw InfeasibleError("t_max must be >= 1");
  }
  for (const auto& record : manifest.records) {
    if (record.frames > t_max) {
      throw InfeasibleError("sequence \"" + record.id + "\" has " + std::to_string(record.frames) +
                            " frames, exceeding t_max " + std::to_string(t_max));
    }
  }

  SeededRng rng(seed);
  FitPool pool(manifest);
  PackingPlan plan{Strategy::bload, t_max, seed, {}};
  while (pool.alive() > 0) {
    Block block;
    block.capacity = t_max;
    std::int64_t remaining = t_max;
    for (;;) {
      const std::int64_t fits = pool.eligible(remaining);
      if (fits == 0) {
        break;
      }
      const std::size_t index = pool.take(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(fits))));
      const auto& record = manifest.records[index];
      block.entries.push_back({record.id, 0, record.frames, t_max - remaining});
      remaining -= record.frames;
    }
    block.pad_frames = remaining;
    plan.blocks.push_back(std::move(block));
  }
  return plan;
}

void validate_plan(const PackingPlan& plan) {
  if (plan.capacity < 1) {
    throw PlanError("plan capacity must be >= 1");
  }
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    const Block& block = plan.blocks[b];
    const std::string where = "block " + std::to_string(b);
    if (block.capacity != plan.capacity) {
      throw PlanError(where + ": capacity " + std::to_string(block.capacity) +
                      " differs from plan capacity " + std::to_string(plan.capacity));
    }
    if (block.entries.empty()) {
      throw PlanError(where + ": blocks must contain at least one entry");
    }
    if (block.pad_frames < 0) {
      throw PlanError(where + ": negative pad_frames");
    }
    std::int64_t offset = 0;
    for (const auto& entry : block.entries) {
      if (entry.length < 1 || entry.source_start < 0) {
        throw PlanError(where + ": entry for \"" + entry.sequence_id + "\" has invalid range");
      }
      if (entry.block_offset != offset) {
        throw PlanError(where + ": entries are not contiguous at \"" + entry.sequence_id + "\"");
      }
      offset += entry.length;
    }
    if (offset + block.pad_frames != block.capacity) {
      throw PlanError(where + ": entries plus padding do not fill the block");
    }
  }
}

PackingMetrics compute_metrics(const PackingPlan& plan, const Manifest& manifest) {
  validate_plan(plan);
  std::unordered_map<std::string_view, std::int64_t> frames_by_id;
  std::int64_t total_input = 0;
  for (const auto& record : manifest.records) {
    frames_by_id.emplace(record.id, record.frames);
    total_input += record.frames;
  }

  PackingMetrics metrics;
  std::int64_t kept = 0;
  for (const auto& block : plan.blocks) {
    metrics.padding_frames += block.pad_frames;
    for (const auto& entry : block.entries) {
      const auto it = frames_by_id.find(entry.sequence_id);
      if (it == frames_by_id.end()) {
        throw PlanError("dangling sequence_id \"" + entry.sequence_id + "\"");
      }
      if (entry.source_start + entry.length > it->second) {
        throw PlanError("entry range [" + std::to_string(entry.source_start) + ", " +
                        std::to_string(entry.source_start + entry.length) + ") exceeds the " +
                        std::to_string(it->second) + " frames of \"" + entry.sequence_id + "\"");
      }
      kept += entry.length;
    }
  }
  metrics.block_count = static_cast<std::int64_t>(plan.blocks.size());
  metrics.processed_frames = metrics.block_count * plan.capacity;
  metrics.frames_deleted = total_input - kept;
  metrics.utilization =
      metrics.processed_frames > 0
          ? 1.0 - static_cast<double>(metrics.padding_frames) / static_cast<double>(metrics.processed_frames)
          : 0.0;
  return metrics;
}

StartIndexTable start_index_table(const PackingPlan& plan) {
  validate_plan(plan);
  StartIndexTable table;
  table.blocks.reserve(plan.blocks.size());
  for (const auto& block : plan.blocks) {
    std::vector<StartEntry> starts;
    starts.reserve(block.entries.size());
    for (const auto& entry : block.entries) {
      starts.push_back({entry.block_offset, entry.sequence_id});
    }
    table.blocks.push_back(std::move(starts));
  }
  return table;
}

}  // namespace bload
