#pragma once

#include <filesystem>
#include <string>

#include "bload/packing.hpp"

namespace bload {

// Plan file schema, keys in this order:
//   {"strategy": "...", "capacity": N, "seed": N,
//    "blocks": [{"entries": [{"id": "...", "source_start": N,
//                             "length": N, "block_offset": N}],
//                "pad_frames": N}]}
std::string plan_to_json(const PackingPlan& plan);

// Parses and validates a plan document. Throws PlanError on schema or
// invariant violations.
PackingPlan plan_from_json(const std::string& text);

PackingPlan read_plan_file(const std::filesystem::path& path);
void write_plan_file(const std::filesystem::path& path, const PackingPlan& plan);

}  // namespace bload
