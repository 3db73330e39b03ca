#include "bload/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace bload {

namespace {

std::int64_t kept_frames(const PackingPlan& plan) {
  std::int64_t kept = 0;
  for (const auto& block : plan.blocks) {
    for (const auto& entry : block.entries) {
      kept += entry.length;
    }
  }
  return kept;
}

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

std::string format_time(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

}  // namespace

std::vector<PlanSummary> summarize_plans(const std::vector<PackingPlan>& plans) {
  std::int64_t input_frames = 0;
  for (const auto& plan : plans) {
    input_frames = std::max(input_frames, kept_frames(plan));
  }

  std::vector<PlanSummary> summaries;
  summaries.reserve(plans.size());
  for (const auto& plan : plans) {
    validate_plan(plan);
    PlanSummary summary;
    summary.strategy = plan.strategy;
    summary.label = std::string(to_string(plan.strategy));
    PackingMetrics& m = summary.metrics;
    for (const auto& block : plan.blocks) {
      m.padding_frames += block.pad_frames;
    }
    m.block_count = static_cast<std::int64_t>(plan.blocks.size());
    m.processed_frames = m.block_count * plan.capacity;
    m.frames_deleted = input_frames - kept_frames(plan);
    m.utilization = m.processed_frames > 0
                        ? 1.0 - static_cast<double>(m.padding_frames) /
                                    static_cast<double>(m.processed_frames)
                        : 0.0;
    summaries.push_back(std::move(summary));
  }

  // Disambiguate repeated strategies so columns stay identifiable.
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    std::size_t repeat = 1;
    for (std::size_t j = 0; j < i; ++j) {
      if (summaries[j].strategy == summaries[i].strategy) {
        ++repeat;
      }
    }
    if (repeat > 1) {
      summaries[i].label += "#" + std::to_string(repeat);
    }
  }
  return summaries;
}

std::optional<double> padding_reduction(const std::vector<PlanSummary>& summaries) {
  std::optional<std::int64_t> naive_pad;
  std::optional<std::int64_t> bload_pad;
  for (const auto& summary : summaries) {
    if (summary.strategy == Strategy::naive && !naive_pad) {
      naive_pad = summary.metrics.padding_frames;
    }
    if (summary.strategy == Strategy::bload && !bload_pad) {
      bload_pad = summary.metrics.padding_frames;
    }
  }
  if (!naive_pad || !bload_pad) {
    return std::nullopt;
  }
  if (*bload_pad == 0) {
    return *naive_pad == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(*naive_pad) / static_cast<double>(*bload_pad);
}

std::string render_metrics_table(const std::vector<PlanSummary>& summaries,
                                 std::optional<double> reduction) {
  const bool with_time =
      std::any_of(summaries.begin(), summaries.end(),
                  [](const PlanSummary& s) { return s.simulated_time.has_value(); });

  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  auto row = [&](const std::string& name, auto&& cell) {
    std::vector<std::string> cells;
    for (const auto& summary : summaries) {
      cells.push_back(cell(summary));
    }
    rows.emplace_back(name, std::move(cells));
  };
  row("padding amount",
      [](const PlanSummary& s) { return std::to_string(s.metrics.padding_frames); });
  row("# frames deleted",
      [](const PlanSummary& s) { return std::to_string(s.metrics.frames_deleted); });
  row("block count", [](const PlanSummary& s) { return std::to_string(s.metrics.block_count); });
  row("processed frames",
      [](const PlanSummary& s) { return std::to_string(s.metrics.processed_frames); });
  row("utilization", [](const PlanSummary& s) { return format_double(s.metrics.utilization, 4); });
  if (with_time) {
    row("time (per epoch)", [](const PlanSummary& s) {
      return s.simulated_time ? format_time(*s.simulated_time) : std::string("-");
    });
  }

  std::size_t name_width = std::string("metric").size();
  for (const auto& [name, cells] : rows) {
    name_width = std::max(name_width, name.size());
  }
  std::vector<std::size_t> widths(summaries.size());
  for (std::size_t c = 0; c < summaries.size(); ++c) {
    widths[c] = summaries[c].label.size();
    for (const auto& [name, cells] : rows) {
      widths[c] = std::max(widths[c], cells[c].size());
    }
  }

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "metric";
  for (std::size_t c = 0; c < summaries.size(); ++c) {
    out << "  " << std::setw(static_cast<int>(widths[c])) << summaries[c].label;
  }
  out << '\n';
  for (const auto& [name, cells] : rows) {
    out << std::setw(static_cast<int>(name_width)) << name;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << "  " << std::setw(static_cast<int>(widths[c])) << cells[c];
    }
    out << '\n';
  }
  if (reduction) {
    out << "padding reduction (naive/bload): ";
    if (std::isinf(*reduction)) {
      out << "inf";
    } else {
      out << format_double(*reduction, 1) << "x";
    }
    out << '\n';
  }
  return out.str();
}

std::string render_metrics_json(const std::vector<PlanSummary>& summaries,
                                std::optional<double> reduction) {
  nlohmann::ordered_json doc;
  doc["plans"] = nlohmann::ordered_json::array();
  for (const auto& summary : summaries) {
    nlohmann::ordered_json entry;
    entry["label"] = summary.label;
    entry["strategy"] = std::string(to_string(summary.strategy));
    entry["padding_frames"] = summary.metrics.padding_frames;
    entry["frames_deleted"] = summary.metrics.frames_deleted;
    entry["block_count"] = summary.metrics.block_count;
    entry["processed_frames"] = summary.metrics.processed_frames;
    entry["utilization"] = summary.metrics.utilization;
    if (summary.simulated_time) {
      entry["simulated_time"] = *summary.simulated_time;
    }
    doc["plans"].push_back(std::move(entry));
  }
  if (reduction) {
    if (std::isinf(*reduction)) {
      doc["padding_reduction_naive_over_bload"] = nullptr;
    } else {
      doc["padding_reduction_naive_over_bload"] = *reduction;
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace bload
