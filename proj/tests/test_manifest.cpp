#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "bload/errors.hpp"
#include "bload/manifest.hpp"
#include "bload/rng.hpp"
#include "testutil.hpp"

using namespace bload;

TEST_CASE("parse_manifest reads records in order") {
  const std::string text =
      "{\"id\": \"a\", \"frames\": 2}\n"
      "{\"id\": \"b\", \"frames\": 3}\n"
      "{\"id\": \"c\", \"frames\": 6}\n";
  const Manifest m = parse_manifest(text);
  REQUIRE(m.size() == 3);
  CHECK(m.records[0] == SequenceRecord{"a", 2});
  CHECK(m.records[1] == SequenceRecord{"b", 3});
  CHECK(m.records[2] == SequenceRecord{"c", 6});
  CHECK(summarize(m).total_frames == 11);
}

TEST_CASE("parse_manifest skips blank lines and tolerates CRLF") {
  const std::string text = "\n{\"id\": \"a\", \"frames\": 1}\r\n   \n{\"id\": \"b\", \"frames\": 2}\n\n";
  const Manifest m = parse_manifest(text);
  REQUIRE(m.size() == 2);
  CHECK(m.records[1].frames == 2);
}

TEST_CASE("parse_manifest rejects bad input with line numbers") {
  SUBCASE("frames zero") {
    CHECK_THROWS_WITH_AS(parse_manifest("{\"id\": \"a\", \"frames\": 0}\n"),
                         doctest::Contains("frames must be >= 1"), ManifestError);
  }
  SUBCASE("negative frames") {
    CHECK_THROWS_AS(parse_manifest("{\"id\": \"a\", \"frames\": -4}\n"), ManifestError);
  }
  SUBCASE("non-integer frames") {
    CHECK_THROWS_AS(parse_manifest("{\"id\": \"a\", \"frames\": 2.5}\n"), ManifestError);
  }
  SUBCASE("duplicate id carries the offending line") {
    const std::string text =
        "{\"id\": \"V1\", \"frames\": 2}\n"
        "{\"id\": \"V1\", \"frames\": 3}\n";
    CHECK_THROWS_WITH_AS(parse_manifest(text), doctest::Contains("line 2: duplicate id \"V1\""),
                         ManifestError);
  }
  SUBCASE("malformed json names the line") {
    const std::string text = "{\"id\": \"V1\", \"frames\": 2}\nnot json\n";
    CHECK_THROWS_WITH_AS(parse_manifest(text), doctest::Contains("line 2"), ManifestError);
  }
  SUBCASE("extra keys rejected") {
    CHECK_THROWS_AS(parse_manifest("{\"id\": \"a\", \"frames\": 2, \"h\": 4}\n"), ManifestError);
  }
  SUBCASE("missing keys rejected") {
    CHECK_THROWS_AS(parse_manifest("{\"id\": \"a\"}\n"), ManifestError);
  }
  SUBCASE("empty id rejected") {
    CHECK_THROWS_AS(parse_manifest("{\"id\": \"\", \"frames\": 2}\n"), ManifestError);
  }
  SUBCASE("empty input rejected") {
    CHECK_THROWS_WITH_AS(parse_manifest(""), doctest::Contains("empty manifest"), ManifestError);
    CHECK_THROWS_AS(parse_manifest("\n\n"), ManifestError);
  }
}

TEST_CASE("summarize computes exact stats") {
  SUBCASE("three lengths") {
    const ManifestStats stats = summarize(testutil::make_manifest({2, 3, 6}));
    CHECK(stats.count == 3);
    CHECK(stats.total_frames == 11);
    CHECK(stats.min_len == 2);
    CHECK(stats.max_len == 6);
    CHECK(stats.mean_len == doctest::Approx(11.0 / 3.0));
  }
  SUBCASE("singleton") {
    const ManifestStats stats = summarize(testutil::make_manifest({5}));
    CHECK(stats.count == 1);
    CHECK(stats.min_len == 5);
    CHECK(stats.max_len == 5);
    CHECK(stats.mean_len == doctest::Approx(5.0));
  }
  SUBCASE("empty manifest throws") {
    CHECK_THROWS_AS(summarize(Manifest{}), ManifestError);
  }
}

TEST_CASE("serialization round trips") {
  SUBCASE("plain manifest") {
    const Manifest m = testutil::make_manifest({2, 3, 6});
    CHECK(parse_manifest(manifest_to_jsonl(m)) == m);
  }
  SUBCASE("ids needing JSON escaping") {
    Manifest m;
    m.records.push_back({"quote\"backslash\\", 4});
    m.records.push_back({"unicode-\xC3\xA9", 7});
    CHECK(parse_manifest(manifest_to_jsonl(m)) == m);
  }
  SUBCASE("key order is id then frames") {
    const Manifest m = testutil::make_manifest({2});
    CHECK(manifest_to_jsonl(m) == "{\"id\":\"V1\",\"frames\":2}\n");
  }
  SUBCASE("file round trip") {
    testutil::TempDir tmp("bload-manifest");
    const Manifest m = testutil::make_manifest({9, 1, 5});
    write_manifest_file(tmp.path("m.jsonl"), m);
    CHECK(read_manifest_file(tmp.path("m.jsonl")) == m);
  }
}

TEST_CASE("generate_synthetic hits the requested stats exactly") {
  SUBCASE("canonical heavy-tailed manifest") {
    const Manifest m = generate_synthetic(testutil::canonical_spec(), testutil::kCanonicalSeed);
    const ManifestStats stats = summarize(m);
    CHECK(stats.count == 7464);
    CHECK(stats.total_frames == 166785);
    CHECK(stats.max_len == 94);
    CHECK(stats.min_len >= 3);
  }
  SUBCASE("bounds force every length") {
    const SyntheticSpec spec{4, 4, 1, 1, LengthShape::uniform};
    const Manifest m = generate_synthetic(spec, 99);
    REQUIRE(m.size() == 4);
    for (const auto& record : m.records) {
      CHECK(record.frames == 1);
    }
  }
  SUBCASE("single record must equal max") {
    const SyntheticSpec spec{1, 9, 3, 9, LengthShape::uniform};
    const Manifest m = generate_synthetic(spec, 0);
    REQUIRE(m.size() == 1);
    CHECK(m.records[0].frames == 9);
  }
}

TEST_CASE("generate_synthetic rejects infeasible specs") {
  CHECK_THROWS_AS(generate_synthetic({4, 3, 1, 1, LengthShape::uniform}, 0), InfeasibleError);
  CHECK_THROWS_AS(generate_synthetic({4, 400, 1, 10, LengthShape::uniform}, 0), InfeasibleError);
  // total too small to contain one max-length record
  CHECK_THROWS_AS(generate_synthetic({4, 6, 1, 10, LengthShape::uniform}, 0), InfeasibleError);
  CHECK_THROWS_AS(generate_synthetic({0, 0, 1, 1, LengthShape::uniform}, 0), InfeasibleError);
  CHECK_THROWS_AS(generate_synthetic({4, 8, 5, 3, LengthShape::uniform}, 0), InfeasibleError);
}

TEST_CASE("generate_synthetic is a pure function of spec and seed") {
  const SyntheticSpec spec{200, 3000, 2, 40, LengthShape::heavy_tailed};
  const std::string first = manifest_to_jsonl(generate_synthetic(spec, 7));
  const std::string second = manifest_to_jsonl(generate_synthetic(spec, 7));
  CHECK(first == second);
  CHECK(manifest_to_jsonl(generate_synthetic(spec, 8)) != first);
}

TEST_CASE("generate_synthetic conservation over random feasible specs") {
  SeededRng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    SyntheticSpec spec;
    spec.count = 1 + static_cast<std::int64_t>(rng.below(30));
    spec.min_len = 1 + static_cast<std::int64_t>(rng.below(5));
    spec.max_len = spec.min_len + static_cast<std::int64_t>(rng.below(20));
    const std::int64_t lower = (spec.count - 1) * spec.min_len + spec.max_len;
    const std::int64_t upper = spec.count * spec.max_len;
    spec.total_frames =
        lower + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(upper - lower + 1)));
    spec.shape = rng.below(2) == 0 ? LengthShape::uniform : LengthShape::heavy_tailed;

    const Manifest m = generate_synthetic(spec, rng.next());
    const ManifestStats stats = summarize(m);
    REQUIRE(stats.count == spec.count);
    REQUIRE(stats.total_frames == spec.total_frames);
    REQUIRE(stats.min_len >= spec.min_len);
    REQUIRE(stats.max_len == spec.max_len);
    REQUIRE(parse_manifest(manifest_to_jsonl(m)) == m);
  }
}
