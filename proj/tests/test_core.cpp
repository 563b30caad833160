/* Copyright 2026 The Perceval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <numbers>
#include <sstream>

#include "builders.hpp"
#include "perceval/core/category.hpp"
#include "perceval/core/error.hpp"
#include "perceval/core/io.hpp"
#include "perceval/core/parallel.hpp"
#include "perceval/core/random.hpp"
#include "perceval/core/validate.hpp"

using namespace perceval::core;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> rules(const FrameSet& s) {
  std::vector<std::string> out;
  for (const auto& v : validate_frameset(s)) out.push_back(v.rule);
  return out;
}

FrameSet single(Kind kind, Entry e) { return build::frames(kind, {{build::key(1), {e}}}); }

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("perceval_core_" + name);
}

}  // namespace

TEST_CASE("valid box has no violations") {
  auto b = build::box(0, 0, 0.9, "REGULAR_VEHICLE", {4, 2, 1.5});
  CHECK(validate_frameset(single(Kind::kDetection, build::detection(b))).empty());
}

TEST_CASE("score above one is reported once") {
  auto b = build::box(0, 0, 1.3);
  CHECK(rules(single(Kind::kDetection, build::detection(b))) ==
        std::vector<std::string>{"score out of range"});
}

TEST_CASE("duplicate track id in one frame") {
  auto fs = build::frames(Kind::kTrack, {{build::key(1),
                                          {build::track(build::box(0, 0), 7),
                                           build::track(build::box(5, 0), 7)}}});
  CHECK(rules(fs) == std::vector<std::string>{"duplicate track_id"});
}

TEST_CASE("kind specific rules") {
  SUBCASE("track without id") {
    CHECK(rules(single(Kind::kTrack, build::detection(build::box(0, 0)))) ==
          std::vector<std::string>{"missing track_id"});
  }
  SUBCASE("detection with id") {
    CHECK(rules(single(Kind::kDetection, build::track(build::box(0, 0), 1))) ==
          std::vector<std::string>{"unexpected track_id"});
  }
  SUBCASE("forecast without modes") {
    CHECK(rules(single(Kind::kForecast, build::detection(build::box(0, 0)))) ==
          std::vector<std::string>{"missing modes"});
  }
  SUBCASE("modes of different horizons") {
    auto e = build::forecast(build::box(0, 0), {{build::straight({0, 0}, {1, 0}, 6), 0.5},
                                                {build::straight({0, 0}, {1, 0}, 5), 0.5}});
    CHECK(rules(single(Kind::kForecast, e)) == std::vector<std::string>{"inconsistent horizon"});
  }
}

TEST_CASE("geometry rules") {
  auto b = build::box(0, 0);
  b.size.y = 0.0;
  CHECK(rules(single(Kind::kDetection, build::detection(b))) ==
        std::vector<std::string>{"non-positive size"});
  auto c = build::box(0, 0);
  c.yaw = 4.0;  // bypasses the normalizing constructor
  CHECK(rules(single(Kind::kDetection, build::detection(c))) ==
        std::vector<std::string>{"yaw not normalized"});
  auto d = build::box(std::nan(""), 0);
  CHECK(rules(single(Kind::kDetection, build::detection(d))) ==
        std::vector<std::string>{"non-finite value"});
  auto e = build::box(0, 0, 1.0, "UNICORN");
  CHECK(rules(single(Kind::kDetection, build::detection(e))) ==
        std::vector<std::string>{"unknown category"});
}

TEST_CASE("validation is pure") {
  auto fs = build::frames(Kind::kTrack, {{build::key(1),
                                          {build::track(build::box(0, 0, 2.0), 7),
                                           build::track(build::box(5, 0), 7)}}});
  CHECK(validate_frameset(fs) == validate_frameset(fs));
  CHECK(validate_frameset(fs).size() == 2);
  CHECK_THROWS_AS(require_valid(fs, "input"), ValidationError);
}

TEST_CASE("yaw normalization") {
  CHECK(normalize_yaw(std::numbers::pi) == std::numbers::pi);
  CHECK(normalize_yaw(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(normalize_yaw(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
  const double y = 0.123456789;
  CHECK(normalize_yaw(y) == y);
  CHECK(normalize_yaw(normalize_yaw(7.5)) == normalize_yaw(7.5));
}

TEST_CASE("empty input reads as no frames") {
  std::istringstream in("");
  CHECK(parse_frameset(in, Kind::kDetection).frames.empty());
  std::istringstream blank("\n\n");
  CHECK(parse_frameset(blank, Kind::kDetection).frames.empty());
}

TEST_CASE("round trip is exact") {
  Rng rng(11);
  SUBCASE("tracks") {
    FrameSet fs;
    fs.kind = Kind::kTrack;
    for (int f = 0; f < 3; ++f) {
      Frame frame;
      for (int i = 0; i < 5; ++i) {
        auto b = Box3D({rng.normal() * 30, rng.normal() * 30, rng.normal()},
                       {rng.uniform(0.1, 9), rng.uniform(0.1, 3), rng.uniform(0.1, 4)},
                       rng.uniform(-4, 4), {rng.normal(), rng.normal()}, rng.uniform(),
                       "BICYCLIST");
        frame.push_back(build::track(b, static_cast<std::uint64_t>(i) * 1000003u));
      }
      fs.frames.emplace(build::key(1'700'000'000'000'000'000ULL + f * 500'000'000ULL), frame);
    }
    std::ostringstream os;
    serialize_frameset(fs, os);
    std::istringstream is(os.str());
    CHECK(parse_frameset(is, Kind::kTrack) == fs);
  }
  SUBCASE("forecasts through a file") {
    auto e = build::forecast(build::box(0.1, 1.0 / 3.0, 0.7),
                             {{build::straight({0.1, 0.2}, {0.3, -1e-17}, 6), 0.6},
                              {build::straight({0.1, 0.2}, {1.0 / 7.0, 2}, 6), 0.4}});
    auto fs = build::frames(Kind::kForecast, {{build::key(5, "a"), {e}}, {build::key(6, "a"), {}}});
    const auto path = temp_file("round_trip.jsonl");
    write_frameset(fs, path);
    CHECK(read_frameset(path, Kind::kForecast) == fs);
    CHECK(sniff_kind(path) == Kind::kForecast);
    fs::remove(path);
  }
}

TEST_CASE("missing field is reported with its line") {
  std::istringstream in(
      "{\"log_id\":\"a\",\"timestamp_ns\":1,\"boxes\":[]}\n"
      "{\"log_id\":\"a\",\"timestamp_ns\":2,\"boxes\":[{\"cx\":0,\"cy\":0,\"cz\":0,\"l\":1,"
      "\"w\":1,\"h\":1,\"vx\":0,\"vy\":0,\"score\":1,\"category\":\"PEDESTRIAN\"}]}\n");
  try {
    parse_frameset(in, Kind::kDetection);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "yaw");
  }
}

TEST_CASE("kind mismatch and duplicates are parse errors") {
  const std::string rec =
      "{\"log_id\":\"a\",\"timestamp_ns\":1,\"boxes\":[{\"cx\":0,\"cy\":0,\"cz\":0,\"l\":1,"
      "\"w\":1,\"h\":1,\"yaw\":0,\"vx\":0,\"vy\":0,\"score\":1,\"category\":\"PEDESTRIAN\"}]}\n";
  std::istringstream as_track(rec);
  CHECK_THROWS_AS(parse_frameset(as_track, Kind::kTrack), ParseError);
  std::istringstream twice(rec + rec);
  CHECK_THROWS_AS(parse_frameset(twice, Kind::kDetection), ParseError);
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(read_frameset("/nonexistent/perceval.jsonl", Kind::kDetection), IoError);
}

TEST_CASE("default registry") {
  const auto& reg = CategoryRegistry::default_registry();
  CHECK(reg.size() == 26);
  CHECK(reg.contains("REGULAR_VEHICLE"));
  CHECK_FALSE(reg.contains("regular_vehicle"));
}

TEST_CASE("rng is reproducible and streams differ") {
  Rng a(5), b(5), c(mix_seed(5, 1));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(Rng(5).next_u64() != c.next_u64());
  Rng d(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(d.below(7) < 7);
  }
}

TEST_CASE("parallel_for fills every slot once") {
  for (int threads : {1, 3, 8}) {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), threads, [&](std::size_t i) { hit[i] += 1; });
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  }
  CHECK_THROWS_AS(parallel_for(10, 4,
                               [](std::size_t i) {
                                 if (i == 7) throw ValidationError("boom");
                               }),
                  ValidationError);
}
