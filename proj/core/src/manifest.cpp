#include "bload/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "bload/errors.hpp"
#include "bload/rng.hpp"
#include "detail/atomic_write.hpp"

namespace bload {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw ManifestError("line " + std::to_string(line_no) + ": " + what);
}

SequenceRecord parse_record(const std::string& line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail_line(line_no, std::string("malformed record: ") + e.what());
  }
  if (!obj.is_object() || obj.size() != 2 || !obj.contains("id") || !obj.contains("frames")) {
    fail_line(line_no, R"(record must be an object with exactly the keys "id" and "frames")");
  }
  const auto& id = obj["id"];
  if (!id.is_string() || id.get<std::string>().empty()) {
    fail_line(line_no, "id must be a non-empty string");
  }
  const auto& frames = obj["frames"];
  if (!frames.is_number_integer()) {
    fail_line(line_no, "frames must be a positive integer");
  }
  if (frames.is_number_unsigned() &&
      frames.get<std::uint64_t>() >
          static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    fail_line(line_no, "frames out of range");
  }
  const std::int64_t count = frames.get<std::int64_t>();
  if (count < 1) {
    fail_line(line_no, "frames must be >= 1");
  }
  return SequenceRecord{id.get<std::string>(), count};
}

}  // namespace

Manifest parse_manifest(std::istream& input) {
  Manifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    SequenceRecord record = parse_record(line, line_no);
    if (!seen.insert(record.id).second) {
      fail_line(line_no, "duplicate id \"" + record.id + "\"");
    }
    manifest.records.push_back(std::move(record));
  }
  if (manifest.records.empty()) {
    throw ManifestError("empty manifest");
  }
  return manifest;
}

Manifest parse_manifest(const std::string& text) {
  std::istringstream stream(text);
  return parse_manifest(stream);
}

void serialize_manifest(const Manifest& manifest, std::ostream& out) {
  for (const auto& record : manifest.records) {
    ordered_json obj;
    obj["id"] = record.id;
    obj["frames"] = record.frames;
    out << obj.dump() << '\n';
  }
}

std::string manifest_to_jsonl(const Manifest& manifest) {
  std::ostringstream out;
  serialize_manifest(manifest, out);
  return out.str();
}

Manifest read_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ManifestError("cannot open manifest file " + path.string());
  }
  return parse_manifest(in);
}

void write_manifest_file(const std::filesystem::path& path, const Manifest& manifest) {
  detail::atomic_write_file(path, manifest_to_jsonl(manifest));
}

ManifestStats summarize(const Manifest& manifest) {
  if (manifest.empty()) {
    throw ManifestError("empty manifest");
  }
  ManifestStats stats;
  stats.count = static_cast<std::int64_t>(manifest.size());
  stats.min_len = std::numeric_limits<std::int64_t>::max();
  for (const auto& record : manifest.records) {
    stats.total_frames += record.frames;
    stats.min_len = std::min(stats.min_len, record.frames);
    stats.max_len = std::max(stats.max_len, record.frames);
  }
  stats.mean_len = static_cast<double>(stats.total_frames) / static_cast<double>(stats.count);
  return stats;
}

namespace {

// Heavy-tailed lengths: a geometrically decaying body over [min_len,
// max_len] plus a point mass at max_len itself, the way duration-capped
// recordings pile up at the device limit. The decay rate is solved so the
// expected length already matches the requested mean, leaving the repair pass
// only sampling noise to absorb. Weights are built with plain multiplies
// (no libm), so the distribution is bit-identical on every platform.
class HeavyTailMixture {
 public:
  HeavyTailMixture(const SyntheticSpec& spec, double target_mean) : min_len_(spec.min_len) {
    const std::size_t range = static_cast<std::size_t>(spec.max_len - spec.min_len + 1);
    if (range == 1) {
      cumulative_ = {1.0};
      return;
    }
    const double lo = static_cast<double>(spec.min_len);
    const double hi = static_cast<double>(spec.max_len);
    const double uniform_mean = (lo + hi) / 2.0;

    // Share of records pinned to max_len, shrunk when the requested mean
    // sits too close to either bound for the default to be solvable.
    double cap = kCapMass;
    cap = std::min(cap, (target_mean - lo) / (hi - lo));
    if (uniform_mean < hi) {
      cap = std::max(cap, (target_mean - uniform_mean) / (hi - uniform_mean));
    }
    cap = std::clamp(cap, 0.0, 1.0);
    const double body_mean_target =
        cap < 1.0 ? (target_mean - cap * hi) / (1.0 - cap) : lo;

    // The body mean grows monotonically with the decay rate q; bisect it.
    double q_lo = 0.0;
    double q_hi = 1.0;
    for (int step = 0; step < 100; ++step) {
      const double q = (q_lo + q_hi) / 2.0;
      (body_mean(q, range) < body_mean_target ? q_lo : q_hi) = q;
    }
    const double q = (q_lo + q_hi) / 2.0;

    double body_total = 0.0;
    double weight = 1.0;
    for (std::size_t k = 0; k < range; ++k) {
      body_total += weight;
      weight *= q;
    }
    cumulative_.resize(range);
    weight = 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < range; ++k) {
      acc += (1.0 - cap) * weight / body_total;
      cumulative_[k] = acc;
      weight *= q;
    }
    cumulative_.back() = 1.0;
  }

  std::int64_t draw(SeededRng& rng) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), rng.unit());
    const auto idx = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                              static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
    return min_len_ + static_cast<std::int64_t>(idx);
  }

 private:
  static constexpr double kCapMass = 0.08;

  double body_mean(double q, std::size_t range) const {
    double weight = 1.0;
    double total = 0.0;
    double moment = 0.0;
    for (std::size_t k = 0; k < range; ++k) {
      total += weight;
      moment += weight * static_cast<double>(min_len_ + static_cast<std::int64_t>(k));
      weight *= q;
    }
    return moment / total;
  }

  std::int64_t min_len_ = 1;
  std::vector<double> cumulative_;
};

std::string synthetic_id(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "v%06lld", static_cast<long long>(index + 1));
  return buf;
}

}  // namespace

Manifest generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.count < 1 || spec.min_len < 1 || spec.min_len > spec.max_len) {
    throw InfeasibleError("infeasible spec: need count >= 1 and 1 <= min_len <= max_len");
  }
  const std::int64_t lower = (spec.count - 1) * spec.min_len + spec.max_len;
  const std::int64_t upper = spec.count * spec.max_len;
  if (spec.total_frames < lower || spec.total_frames > upper) {
    throw InfeasibleError("infeasible spec: total_frames must lie in [" + std::to_string(lower) +
                          ", " + std::to_string(upper) + "] for these bounds, got " +
                          std::to_string(spec.total_frames));
  }

  SeededRng rng(seed);
  const std::int64_t range = spec.max_len - spec.min_len + 1;
  const std::size_t count = static_cast<std::size_t>(spec.count);

  std::vector<std::int64_t> lengths(count);
  const std::size_t pinned = rng.index(count);
  // Mean the non-pinned records must hit, given one record held at max_len.
  const double target_mean =
      spec.count > 1 ? static_cast<double>(spec.total_frames - spec.max_len) /
                           static_cast<double>(spec.count - 1)
                     : static_cast<double>(spec.max_len);
  const HeavyTailMixture mixture(spec, target_mean);
  for (std::size_t i = 0; i < count; ++i) {
    if (i == pinned) {
      lengths[i] = spec.max_len;
      continue;
    }
    if (spec.shape == LengthShape::uniform) {
      lengths[i] = spec.min_len + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(range)));
    } else {
      lengths[i] = mixture.draw(rng);
    }
  }

  // Repair pass: +/-1 nudges on randomly chosen records until the total is
  // exact. The pinned record stays at max_len so summarize() reproduces the
  // requested maximum.
  std::int64_t delta = spec.total_frames;
  for (const std::int64_t len : lengths) {
    delta -= len;
  }
  while (delta != 0) {
    const std::size_t i = rng.index(count);
    if (i == pinned) {
      continue;
    }
    if (delta > 0 && lengths[i] < spec.max_len) {
      ++lengths[i];
      --delta;
    } else if (delta < 0 && lengths[i] > spec.min_len) {
      --lengths[i];
      ++delta;
    }
  }

  Manifest manifest;
  manifest.records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    manifest.records.push_back({synthetic_id(static_cast<std::int64_t>(i)), lengths[i]});
  }
  return manifest;
}

}  // namespace bload
