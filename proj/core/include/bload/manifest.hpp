#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace bload {

// One logical video: an identifier plus its frame count. Spatial
// dimensions are irrelevant to packing and are not modeled.
struct SequenceRecord {
  std::string id;
  std::int64_t frames = 0;  // >= 1

  bool operator==(const SequenceRecord&) const = default;
};

// Ordered collection of sequence records with unique ids. Immutable once
// built; all operations treat it as read-only.
struct Manifest {
  std::vector<SequenceRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }

  bool operator==(const Manifest&) const = default;
};

struct ManifestStats {
  std::int64_t count = 0;
  std::int64_t total_frames = 0;
  std::int64_t min_len = 0;
  std::int64_t max_len = 0;
  double mean_len = 0.0;
};

// uniform: lengths drawn uniformly over [min_len, max_len].
// heavy_tailed: geometric decay from min_len plus a point mass at max_len
// (duration-capped recordings accumulate at the limit), with the decay rate
// solved so the expected total matches total_frames before repair.
enum class LengthShape { uniform, heavy_tailed };

// Target distribution for generate_synthetic. Feasibility requires
//   (count - 1) * min_len + max_len <= total_frames <= count * max_len
// (the lower bound is tightened beyond count * min_len because the output
// always contains one record of exactly max_len).
struct SyntheticSpec {
  std::int64_t count = 0;
  std::int64_t total_frames = 0;
  std::int64_t min_len = 1;
  std::int64_t max_len = 1;
  LengthShape shape = LengthShape::uniform;
};

// Parses the JSON Lines manifest format: one object per non-blank line,
// exactly the keys "id" and "frames". Throws ManifestError with the line
// number on malformed input, duplicate ids, frames < 1, or empty input.
Manifest parse_manifest(std::istream& input);
Manifest parse_manifest(const std::string& text);

// Serializes in the same format, keys emitted in the order id, frames.
void serialize_manifest(const Manifest& manifest, std::ostream& out);
std::string manifest_to_jsonl(const Manifest& manifest);

// File helpers. Writes go through a temp file + rename.
Manifest read_manifest_file(const std::filesystem::path& path);
void write_manifest_file(const std::filesystem::path& path, const Manifest& manifest);

// Exact summary statistics. Throws ManifestError on an empty manifest.
ManifestStats summarize(const Manifest& manifest);

// Draws `count` lengths from the requested shape, then repairs the total
// with seeded +/-1 adjustments until sum(frames) == total_frames, keeping
// every length inside [min_len, max_len] and one record pinned at max_len.
// Pure function of (spec, seed). Throws InfeasibleError on infeasible specs.
Manifest generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace bload
