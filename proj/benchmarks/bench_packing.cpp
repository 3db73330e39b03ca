#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "bload/ddp_sim.hpp"
#include "bload/manifest.hpp"
#include "bload/oracle.hpp"
#include "bload/packing.hpp"
#include "bload/reset_mask.hpp"

namespace {

bload::Manifest workload(std::int64_t count, std::int64_t mean_len) {
  bload::SyntheticSpec spec;
  spec.count = count;
  spec.total_frames = count * mean_len;
  spec.min_len = 3;
  spec.max_len = 94;
  spec.shape = bload::LengthShape::heavy_tailed;
  return bload::generate_synthetic(spec, 17);
}

void bm_pack_naive(benchmark::State& state) {
  const bload::Manifest m = workload(state.range(0), 22);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bload::pack_naive(m));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_pack_naive)->Arg(1000)->Arg(7464);

void bm_pack_bload(benchmark::State& state) {
  const bload::Manifest m = workload(state.range(0), 22);
  const std::int64_t t_max = bload::summarize(m).max_len;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bload::pack_bload(m, t_max, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_pack_bload)->Arg(1000)->Arg(7464)->Arg(50000);

void bm_pack_mixed(benchmark::State& state) {
  const bload::Manifest m = workload(state.range(0), 22);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bload::pack_mixed(m, 22));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_pack_mixed)->Arg(7464);

void bm_optimal_packing(benchmark::State& state) {
  std::vector<std::int64_t> lengths;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    lengths.push_back(2 + (i * 7) % 9);
  }
  bload::Manifest m;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    m.records.push_back({"V" + std::to_string(i + 1), lengths[i]});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(bload::optimal_packing(m, 12));
  }
}
BENCHMARK(bm_optimal_packing)->DenseRange(8, 12, 2);

void bm_simulate_epoch(benchmark::State& state) {
  const bload::Manifest m = workload(7464, 22);
  const bload::PackingPlan plan = bload::pack_bload(m, 94, 1);
  const bload::RankAssignment a =
      bload::assign_to_ranks(bload::units_from_plan(plan), state.range(0), 4, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bload::simulate_epoch(a, 1.0));
  }
}
BENCHMARK(bm_simulate_epoch)->Arg(2)->Arg(8);

void bm_build_masks(benchmark::State& state) {
  const bload::Manifest m = workload(7464, 22);
  const bload::PackingPlan plan = bload::pack_bload(m, 94, 1);
  for (auto _ : state) {
    for (const auto& block : plan.blocks) {
      benchmark::DoNotOptimize(bload::build_masks(block));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(plan.blocks.size()));
}
BENCHMARK(bm_build_masks);

}  // namespace

BENCHMARK_MAIN();
