// bload: build, inspect, and simulate block-packing plans for
// variable-length sequence training.
//
// Exit codes: 0 success, 1 usage error, 2 invalid manifest or plan file,
// 3 infeasible request (sequence longer than capacity, nothing packable,
// infeasible synthetic spec, no complete round).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bload/ddp_sim.hpp"
#include "bload/errors.hpp"
#include "bload/manifest.hpp"
#include "bload/oracle.hpp"
#include "bload/packing.hpp"
#include "bload/plan_io.hpp"
#include "bload/report.hpp"
#include "bload/reset_mask.hpp"

namespace {

using bload::InfeasibleError;
using bload::ManifestError;
using bload::PackingPlan;
using bload::PlanError;
using bload::Strategy;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidManifest = 2;
constexpr int kExitInfeasible = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(const std::string& list) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream stream(list);
  while (std::getline(stream, current, ',')) {
    if (!current.empty()) {
      parts.push_back(current);
    }
  }
  return parts;
}

struct GenManifestArgs {
  std::int64_t count = 0;
  std::int64_t total_frames = 0;
  std::int64_t min_len = 0;
  std::int64_t max_len = 0;
  std::string dist = "heavy-tailed";
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_manifest(const GenManifestArgs& args) {
  bload::SyntheticSpec spec;
  spec.count = args.count;
  spec.total_frames = args.total_frames;
  spec.min_len = args.min_len;
  spec.max_len = args.max_len;
  spec.shape = args.dist == "uniform" ? bload::LengthShape::uniform
                                      : bload::LengthShape::heavy_tailed;
  const bload::Manifest manifest = bload::generate_synthetic(spec, args.seed);
  bload::write_manifest_file(args.out, manifest);
  std::cerr << "wrote " << args.out << " (" << manifest.size() << " records)\n";
  return kExitOk;
}

struct PackArgs {
  std::string manifest_path;
  std::string strategy;
  std::optional<std::int64_t> t_max;
  std::optional<std::int64_t> t_block;
  std::optional<std::int64_t> t_mix;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_pack(const PackArgs& args) {
  const bload::Manifest manifest = bload::read_manifest_file(args.manifest_path);
  const Strategy strategy = *bload::strategy_from_string(args.strategy);

  PackingPlan plan;
  switch (strategy) {
    case Strategy::naive:
      plan = bload::pack_naive(manifest);
      break;
    case Strategy::chunks:
      if (!args.t_block) {
        throw UsageError("--t-block is required for strategy chunks");
      }
      plan = bload::pack_chunks(manifest, *args.t_block);
      break;
    case Strategy::mixed:
      if (!args.t_mix) {
        throw UsageError("--t-mix is required for strategy mixed");
      }
      plan = bload::pack_mixed(manifest, *args.t_mix);
      break;
    case Strategy::bload: {
      if (!args.seed) {
        throw UsageError("--seed is required for strategy bload");
      }
      const std::int64_t t_max = args.t_max ? *args.t_max : bload::summarize(manifest).max_len;
      plan = bload::pack_bload(manifest, t_max, *args.seed);
      break;
    }
  }
  bload::write_plan_file(args.out, plan);
  std::cerr << "wrote " << args.out << " (" << plan.blocks.size() << " blocks of capacity "
            << plan.capacity << ")\n";
  return kExitOk;
}

int run_oracle(const std::string& manifest_path, std::int64_t capacity,
               const std::string& format) {
  const bload::Manifest manifest = bload::read_manifest_file(manifest_path);
  const bload::OptimalResult result = bload::optimal_packing(manifest, capacity);
  if (format == "text") {
    std::cout << "min blocks: " << result.min_blocks << "\n"
              << "min padding: " << result.min_padding << "\n";
    for (const auto& block : result.witness) {
      std::cout << "block:";
      for (const auto& entry : block.entries) {
        std::cout << ' ' << entry.sequence_id;
      }
      std::cout << " (pad " << block.pad_frames << ")\n";
    }
    return kExitOk;
  }
  ordered_json doc;
  doc["min_blocks"] = result.min_blocks;
  doc["min_padding"] = result.min_padding;
  doc["blocks"] = ordered_json::array();
  for (const auto& block : result.witness) {
    ordered_json ids = ordered_json::array();
    for (const auto& entry : block.entries) {
      ids.push_back(entry.sequence_id);
    }
    doc["blocks"].push_back(std::move(ids));
  }
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

ordered_json trace_to_json(const bload::RankAssignment& assignment,
                           const bload::StepTrace& trace) {
  ordered_json doc;
  doc["world_size"] = trace.world_size;
  doc["batch_size"] = trace.batch_size;
  doc["rounds_total"] = assignment.rounds();
  doc["rounds_simulated"] = trace.round_iterations.size();
  doc["dropped_units"] = assignment.dropped_units;
  doc["round_iterations"] = trace.round_iterations;
  if (trace.deadlock) {
    ordered_json d;
    d["round"] = trace.deadlock->round;
    d["iteration"] = trace.deadlock->iteration;
    d["stalled_ranks"] = trace.deadlock->stalled_ranks;
    d["exhausted_ranks"] = trace.deadlock->exhausted_ranks;
    doc["deadlock"] = std::move(d);
  } else {
    doc["deadlock"] = nullptr;
  }
  doc["simulated_time"] = trace.simulated_time;
  doc["sync_events"] = ordered_json::array();
  for (const auto& event : trace.sync_events) {
    ordered_json e;
    e["round"] = event.round;
    e["iteration"] = event.iteration;
    e["ranks"] = event.ranks;
    doc["sync_events"].push_back(std::move(e));
  }
  return doc;
}

std::string trace_summary(const bload::StepTrace& trace) {
  std::ostringstream out;
  if (trace.deadlock) {
    out << "deadlock: round " << trace.deadlock->round << ", iteration "
        << trace.deadlock->iteration << " (stalled ranks:";
    for (const auto rank : trace.deadlock->stalled_ranks) {
      out << ' ' << rank;
    }
    out << "; exhausted ranks:";
    for (const auto rank : trace.deadlock->exhausted_ranks) {
      out << ' ' << rank;
    }
    out << ")\n";
  } else {
    out << "deadlock: none (" << trace.round_iterations.size() << " rounds completed)\n";
  }
  out << "simulated time: " << trace.simulated_time << "\n";
  return out.str();
}

struct SimulateArgs {
  std::string plan_path;
  std::string manifest_path;
  bool raw = false;
  std::int64_t world_size = 1;
  std::int64_t batch_size = 1;
  std::uint64_t seed = 0;
  double cost_per_frame = 1.0;
  std::string format = "both";
};

int run_simulate(const SimulateArgs& args) {
  std::vector<bload::WorkUnit> units;
  if (!args.plan_path.empty()) {
    units = bload::units_from_plan(bload::read_plan_file(args.plan_path));
  } else {
    if (!args.raw) {
      throw UsageError("--manifest requires --raw (or pass --plan instead)");
    }
    units = bload::units_from_manifest(bload::read_manifest_file(args.manifest_path));
  }
  const bload::RankAssignment assignment =
      bload::assign_to_ranks(units, args.world_size, args.batch_size, args.seed);
  const bload::StepTrace trace = bload::simulate_epoch(assignment, args.cost_per_frame);

  if (args.format == "text") {
    std::cout << trace_summary(trace);
  } else if (args.format == "json") {
    std::cout << trace_to_json(assignment, trace).dump(2) << "\n";
  } else {
    std::cout << trace_to_json(assignment, trace).dump(2) << "\n";
    std::cerr << trace_summary(trace);
  }
  // A deadlocked trace is still a successful simulation.
  return kExitOk;
}

int run_masks(const std::string& plan_path, std::int64_t block_index, const std::string& format) {
  const PackingPlan plan = bload::read_plan_file(plan_path);
  if (block_index < 0 || block_index >= static_cast<std::int64_t>(plan.blocks.size())) {
    throw UsageError("--block " + std::to_string(block_index) + " out of range: plan has " +
                     std::to_string(plan.blocks.size()) + " blocks");
  }
  const bload::FrameMasks masks =
      bload::build_masks(plan.blocks[static_cast<std::size_t>(block_index)]);
  if (format == "text") {
    auto render = [](const std::vector<bool>& bits) {
      std::string s;
      for (const bool bit : bits) {
        s += bit ? '1' : '0';
      }
      return s;
    };
    std::cout << "reset: " << render(masks.reset) << "\n"
              << "valid: " << render(masks.valid) << "\n";
    return kExitOk;
  }
  ordered_json doc;
  doc["block"] = block_index;
  doc["reset"] = ordered_json::array();
  doc["valid"] = ordered_json::array();
  for (const bool bit : masks.reset) {
    doc["reset"].push_back(bit ? 1 : 0);
  }
  for (const bool bit : masks.valid) {
    doc["valid"].push_back(bit ? 1 : 0);
  }
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int emit_report(const std::vector<bload::PlanSummary>& summaries,
                std::optional<double> reduction, const std::string& format,
                const ordered_json* params) {
  if (format != "text") {
    std::string json = bload::render_metrics_json(summaries, reduction);
    if (params != nullptr) {
      ordered_json doc = ordered_json::parse(json);
      doc["params"] = *params;
      json = doc.dump(2) + "\n";
    }
    std::cout << json;
  }
  if (format != "json") {
    if (format == "both") {
      std::cout << "\n";
    }
    std::cout << bload::render_metrics_table(summaries, reduction);
  }
  return kExitOk;
}

int run_report(const std::string& plans_list, const std::string& format) {
  const std::vector<std::string> paths = split_commas(plans_list);
  if (paths.empty()) {
    throw UsageError("--plans needs at least one plan file");
  }
  std::vector<PackingPlan> plans;
  plans.reserve(paths.size());
  for (const auto& path : paths) {
    plans.push_back(bload::read_plan_file(path));
  }
  const auto summaries = bload::summarize_plans(plans);
  return emit_report(summaries, bload::padding_reduction(summaries), format, nullptr);
}

struct CompareArgs {
  std::string manifest_path;
  std::uint64_t seed = 0;
  std::int64_t t_block = 0;
  std::int64_t t_mix = 0;
  std::optional<std::int64_t> t_max;
  std::string format = "both";
};

int run_compare(const CompareArgs& args) {
  const bload::Manifest manifest = bload::read_manifest_file(args.manifest_path);
  const std::int64_t t_max = args.t_max ? *args.t_max : bload::summarize(manifest).max_len;

  const std::vector<PackingPlan> plans = {
      bload::pack_naive(manifest),
      bload::pack_chunks(manifest, args.t_block),
      bload::pack_mixed(manifest, args.t_mix),
      bload::pack_bload(manifest, t_max, args.seed),
  };

  std::vector<bload::PlanSummary> summaries;
  for (const auto& plan : plans) {
    bload::PlanSummary summary;
    summary.label = std::string(bload::to_string(plan.strategy));
    summary.strategy = plan.strategy;
    summary.metrics = bload::compute_metrics(plan, manifest);
    // Frames-processed time model: world size 1, unit cost, so the time
    // column is directly the processed-frame count.
    summary.simulated_time = bload::epoch_time_estimate(plan, 1, 1.0);
    summaries.push_back(std::move(summary));
  }

  ordered_json params;
  params["seed"] = args.seed;
  params["t_block"] = args.t_block;
  params["t_mix"] = args.t_mix;
  params["t_max"] = t_max;
  return emit_report(summaries, bload::padding_reduction(summaries), args.format, &params);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block packing strategies for variable-length sequence batches"};
  app.require_subcommand(1);

  GenManifestArgs gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-manifest", "Generate a synthetic manifest with exact count/total/max statistics");
  gen_cmd->add_option("--count", gen.count, "Number of sequences")->required();
  gen_cmd->add_option("--total-frames", gen.total_frames, "Exact total frame count")->required();
  gen_cmd->add_option("--min-len", gen.min_len, "Minimum sequence length")->required();
  gen_cmd->add_option("--max-len", gen.max_len, "Maximum sequence length (always attained)")
      ->required();
  gen_cmd->add_option("--dist", gen.dist, "Length distribution")
      ->check(CLI::IsMember({"uniform", "heavy-tailed"}))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output manifest path (JSON Lines)")->required();

  PackArgs pack;
  CLI::App* pack_cmd = app.add_subcommand("pack", "Pack a manifest into a plan file");
  pack_cmd->add_option("--manifest", pack.manifest_path, "Manifest file")->required();
  pack_cmd->add_option("--strategy", pack.strategy, "Packing strategy")
      ->check(CLI::IsMember({"naive", "chunks", "mixed", "bload"}))
      ->required();
  pack_cmd->add_option("--t-max", pack.t_max,
                       "Block capacity for bload (default: longest sequence)");
  pack_cmd->add_option("--t-block", pack.t_block, "Chunk size for chunks");
  pack_cmd->add_option("--t-mix", pack.t_mix, "Trim-and-pad capacity for mixed");
  pack_cmd->add_option("--seed", pack.seed, "Sampling seed (required for bload)");
  pack_cmd->add_option("--out", pack.out, "Output plan path")->required();

  std::string oracle_manifest;
  std::int64_t oracle_capacity = 0;
  std::string oracle_format = "json";
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Exact minimal-padding packing for small manifests");
  oracle_cmd->add_option("--manifest", oracle_manifest, "Manifest file (<= 12 sequences)")
      ->required();
  oracle_cmd->add_option("--capacity", oracle_capacity, "Block capacity")->required();
  oracle_cmd->add_option("--format", oracle_format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Simulate a data-parallel epoch over a plan or raw sequences");
  auto* sim_plan = sim_cmd->add_option("--plan", sim.plan_path, "Plan file (one unit per block)");
  auto* sim_manifest =
      sim_cmd->add_option("--manifest", sim.manifest_path, "Manifest file (with --raw)");
  sim_plan->excludes(sim_manifest);
  sim_manifest->excludes(sim_plan);
  sim_cmd->add_flag("--raw", sim.raw, "Deal raw variable-length sequences");
  sim_cmd->add_option("--world-size", sim.world_size, "Number of ranks")->required();
  sim_cmd->add_option("--batch-size", sim.batch_size, "Units per rank per round")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Shuffle seed")->required();
  sim_cmd->add_option("--cost-per-frame", sim.cost_per_frame, "Time units per frame iteration")
      ->capture_default_str();
  sim_cmd->add_option("--format", sim.format, "json, text, or both")
      ->check(CLI::IsMember({"json", "text", "both"}));

  std::string masks_plan;
  std::int64_t masks_block = 0;
  std::string masks_format = "json";
  CLI::App* masks_cmd =
      app.add_subcommand("masks", "Reset/valid masks for one block of a plan");
  masks_cmd->add_option("--plan", masks_plan, "Plan file")->required();
  masks_cmd->add_option("--block", masks_block, "Block index (0-based)")->required();
  masks_cmd->add_option("--format", masks_format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  std::string report_plans;
  std::string report_format = "both";
  CLI::App* report_cmd =
      app.add_subcommand("report", "Metrics table for previously written plan files");
  report_cmd->add_option("--plans", report_plans, "Comma-separated plan files")->required();
  report_cmd->add_option("--format", report_format, "json, text, or both")
      ->check(CLI::IsMember({"json", "text", "both"}));

  CompareArgs cmp;
  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "Pack one manifest with all four strategies and compare");
  cmp_cmd->add_option("--manifest", cmp.manifest_path, "Manifest file")->required();
  cmp_cmd->add_option("--seed", cmp.seed, "bload sampling seed")->required();
  cmp_cmd->add_option("--t-block", cmp.t_block, "Chunk size for the chunks column")->required();
  cmp_cmd->add_option("--t-mix", cmp.t_mix, "Capacity for the mixed column")->required();
  cmp_cmd->add_option("--t-max", cmp.t_max,
                      "Block capacity for bload (default: longest sequence)");
  cmp_cmd->add_option("--format", cmp.format, "json, text, or both")
      ->check(CLI::IsMember({"json", "text", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      return run_gen_manifest(gen);
    }
    if (pack_cmd->parsed()) {
      return run_pack(pack);
    }
    if (oracle_cmd->parsed()) {
      return run_oracle(oracle_manifest, oracle_capacity, oracle_format);
    }
    if (sim_cmd->parsed()) {
      if (sim.plan_path.empty() && sim.manifest_path.empty()) {
        throw UsageError("pass --plan or --manifest --raw");
      }
      return run_simulate(sim);
    }
    if (masks_cmd->parsed()) {
      return run_masks(masks_plan, masks_block, masks_format);
    }
    if (report_cmd->parsed()) {
      return run_report(report_plans, report_format);
    }
    if (cmp_cmd->parsed()) {
      return run_compare(cmp);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidManifest;
  } catch (const PlanError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidManifest;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
