#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bload/errors.hpp"
#include "bload/oracle.hpp"
#include "bload/packing.hpp"
#include "bload/rng.hpp"
#include "testutil.hpp"

using namespace bload;
using testutil::make_manifest;

namespace {

// Independent reference: brute-force over all assignments of sequences to
// numbered blocks (at most n blocks matter). Exponential but fine for n <= 7.
std::int64_t brute_force_min_blocks(const std::vector<std::int64_t>& lengths,
                                    std::int64_t capacity) {
  const std::size_t n = lengths.size();
  std::vector<std::size_t> assign(n, 0);
  std::int64_t best = static_cast<std::int64_t>(n);
  while (true) {
    std::vector<std::int64_t> load(n, 0);
    bool ok = true;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      load[assign[i]] += lengths[i];
      ok = load[assign[i]] <= capacity;
    }
    if (ok) {
      for (std::size_t b = 0; b < n; ++b) {
        used += load[b] > 0 ? 1 : 0;
      }
      best = std::min(best, static_cast<std::int64_t>(used));
    }
    std::size_t pos = 0;
    while (pos < n && assign[pos] + 1 == n) {
      assign[pos] = 0;
      ++pos;
    }
    if (pos == n) {
      break;
    }
    ++assign[pos];
  }
  return best;
}

}  // namespace

TEST_CASE("optimal packing on small hand-checked pools") {
  SUBCASE("two long and two short") {
    const OptimalResult r = optimal_packing(make_manifest({2, 2, 6, 6}), 6);
    CHECK(r.min_blocks == 3);
    CHECK(r.min_padding == 2);
  }
  SUBCASE("pair fits exactly") {
    const OptimalResult r = optimal_packing(make_manifest({3, 3}), 6);
    CHECK(r.min_blocks == 1);
    CHECK(r.min_padding == 0);
  }
  SUBCASE("three that pair poorly") {
    const OptimalResult r = optimal_packing(make_manifest({4, 4, 4}), 6);
    CHECK(r.min_blocks == 3);
    CHECK(r.min_padding == 6);
  }
  SUBCASE("single sequence") {
    const OptimalResult r = optimal_packing(make_manifest({5}), 9);
    CHECK(r.min_blocks == 1);
    CHECK(r.min_padding == 4);
  }
}

TEST_CASE("optimal packing witness is valid and canonical") {
  const Manifest m = make_manifest({6, 2, 6, 2});
  const OptimalResult r = optimal_packing(m, 6);
  REQUIRE(r.min_blocks == 3);

  // The witness is a real plan: validate it and re-derive the padding.
  PackingPlan plan;
  plan.strategy = Strategy::bload;
  plan.capacity = 6;
  plan.seed = 0;
  plan.blocks = r.witness;
  validate_plan(plan);
  std::int64_t pad = 0;
  for (const auto& block : plan.blocks) {
    pad += block.pad_frames;
  }
  CHECK(pad == r.min_padding);

  // Canonical tie-break: blocks listed by smallest member position, members
  // in manifest order. For {6,2,6,2} that is {V1}, {V2,V4}, {V3}.
  REQUIRE(r.witness.size() == 3);
  CHECK(r.witness[0].entries[0].sequence_id == "V1");
  REQUIRE(r.witness[1].entries.size() == 2);
  CHECK(r.witness[1].entries[0].sequence_id == "V2");
  CHECK(r.witness[1].entries[1].sequence_id == "V4");
  CHECK(r.witness[2].entries[0].sequence_id == "V3");
}

TEST_CASE("optimal padding equals min_blocks * capacity - total") {
  SeededRng rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    std::vector<std::int64_t> lengths;
    for (std::size_t i = 0; i < n; ++i) {
      lengths.push_back(1 + static_cast<std::int64_t>(rng.below(10)));
    }
    const std::int64_t capacity =
        *std::max_element(lengths.begin(), lengths.end()) +
        static_cast<std::int64_t>(rng.below(4));
    const std::int64_t total = std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0});
    const OptimalResult r = optimal_packing(make_manifest(lengths), capacity);
    CHECK(r.min_padding == r.min_blocks * capacity - total);
    // never fewer blocks than the volume bound
    CHECK(r.min_blocks >= (total + capacity - 1) / capacity);
    CHECK(r.min_blocks == brute_force_min_blocks(lengths, capacity));
  }
}

TEST_CASE("greedy packing is sandwiched by the optimum and the naive plan") {
  SeededRng rng(777);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    std::vector<std::int64_t> lengths;
    for (std::size_t i = 0; i < n; ++i) {
      lengths.push_back(1 + static_cast<std::int64_t>(rng.below(10)));
    }
    const Manifest m = make_manifest(lengths);
    const std::int64_t capacity = summarize(m).max_len;
    const OptimalResult opt = optimal_packing(m, capacity);
    const PackingPlan greedy = pack_bload(m, capacity, rng.next());
    const PackingPlan naive = pack_naive(m);
    CHECK(opt.min_padding <= testutil::total_padding(greedy));
    CHECK(testutil::total_padding(greedy) <= testutil::total_padding(naive));
  }
}

TEST_CASE("oracle input limits") {
  SUBCASE("too many sequences") {
    std::vector<std::int64_t> lengths(13, 1);
    CHECK_THROWS_AS(optimal_packing(make_manifest(lengths), 4), InfeasibleError);
  }
  SUBCASE("sequence longer than the capacity") {
    CHECK_THROWS_AS(optimal_packing(make_manifest({2, 9}), 8), InfeasibleError);
  }
  SUBCASE("empty manifest") {
    CHECK_THROWS_AS(optimal_packing(Manifest{}, 8), ManifestError);
  }
  SUBCASE("largest supported size works") {
    std::vector<std::int64_t> lengths(12, 3);
    const OptimalResult r = optimal_packing(make_manifest(lengths), 6);
    CHECK(r.min_blocks == 6);
    CHECK(r.min_padding == 0);
  }
}
