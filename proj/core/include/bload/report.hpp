#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bload/packing.hpp"

namespace bload {

// One column of a comparison report.
struct PlanSummary {
  std::string label;
  Strategy strategy = Strategy::naive;
  PackingMetrics metrics;
  std::optional<double> simulated_time;
};

// Metrics derived from plan files alone. A plan does not record how many
// input frames its manifest held, so deleted counts are taken relative to
// the largest kept-frame total among the given plans; that is exact
// whenever the set includes a lossless plan (naive or bload) packed from
// the same manifest. Pure function of the plans.
std::vector<PlanSummary> summarize_plans(const std::vector<PackingPlan>& plans);

// naive/bload padding ratio for the footer line. Empty when either
// strategy is missing; 1.0 when both paddings are zero; +inf when only the
// bload padding is zero.
std::optional<double> padding_reduction(const std::vector<PlanSummary>& summaries);

// Plain-text table, one column per summary. Rows include "padding amount"
// and "# frames deleted"; a "time (per epoch)" row appears when any
// summary carries a simulated time.
std::string render_metrics_table(const std::vector<PlanSummary>& summaries,
                                 std::optional<double> reduction = std::nullopt);

// Same content as a JSON document.
std::string render_metrics_json(const std::vector<PlanSummary>& summaries,
                                std::optional<double> reduction = std::nullopt);

}  // namespace bload
