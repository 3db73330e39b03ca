#include "bload/plan_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bload/errors.hpp"
#include "detail/atomic_write.hpp"

namespace bload {

namespace {

using ordered_json = nlohmann::ordered_json;

std::int64_t require_int(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw PlanError(std::string("plan field \"") + key + "\" missing or not an integer");
  }
  return obj[key].get<std::int64_t>();
}

}  // namespace

std::string plan_to_json(const PackingPlan& plan) {
  ordered_json doc;
  doc["strategy"] = std::string(to_string(plan.strategy));
  doc["capacity"] = plan.capacity;
  doc["seed"] = plan.seed;
  ordered_json blocks = ordered_json::array();
  for (const auto& block : plan.blocks) {
    ordered_json entries = ordered_json::array();
    for (const auto& entry : block.entries) {
      ordered_json e;
      e["id"] = entry.sequence_id;
      e["source_start"] = entry.source_start;
      e["length"] = entry.length;
      e["block_offset"] = entry.block_offset;
      entries.push_back(std::move(e));
    }
    ordered_json b;
    b["entries"] = std::move(entries);
    b["pad_frames"] = block.pad_frames;
    blocks.push_back(std::move(b));
  }
  doc["blocks"] = std::move(blocks);
  return doc.dump(2) + "\n";
}

PackingPlan plan_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PlanError(std::string("malformed plan JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw PlanError("plan document must be a JSON object");
  }
  if (!doc.contains("strategy") || !doc["strategy"].is_string()) {
    throw PlanError("plan field \"strategy\" missing or not a string");
  }
  const auto strategy = strategy_from_string(doc["strategy"].get<std::string>());
  if (!strategy) {
    throw PlanError("unknown strategy \"" + doc["strategy"].get<std::string>() + "\"");
  }

  PackingPlan plan;
  plan.strategy = *strategy;
  plan.capacity = require_int(doc, "capacity");
  if (!doc.contains("seed") || !doc["seed"].is_number_integer()) {
    throw PlanError("plan field \"seed\" missing or not an integer");
  }
  plan.seed = doc["seed"].get<std::uint64_t>();

  if (!doc.contains("blocks") || !doc["blocks"].is_array()) {
    throw PlanError("plan field \"blocks\" missing or not an array");
  }
  for (const auto& b : doc["blocks"]) {
    if (!b.is_object() || !b.contains("entries") || !b["entries"].is_array()) {
      throw PlanError("each block must be an object with an \"entries\" array");
    }
    Block block;
    block.capacity = plan.capacity;
    block.pad_frames = require_int(b, "pad_frames");
    for (const auto& e : b["entries"]) {
      if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) {
        throw PlanError("each entry must be an object with a string \"id\"");
      }
      BlockEntry entry;
      entry.sequence_id = e["id"].get<std::string>();
      entry.source_start = require_int(e, "source_start");
      entry.length = require_int(e, "length");
      entry.block_offset = require_int(e, "block_offset");
      block.entries.push_back(std::move(entry));
    }
    plan.blocks.push_back(std::move(block));
  }
  validate_plan(plan);
  return plan;
}

PackingPlan read_plan_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PlanError("cannot open plan file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return plan_from_json(buffer.str());
}

void write_plan_file(const std::filesystem::path& path, const PackingPlan& plan) {
  detail::atomic_write_file(path, plan_to_json(plan));
}

}  // namespace bload
