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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Criteria 1 and 10 drive the built command-line binary.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "builders.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "perceval/core/io.hpp"
#include "perceval/dataops/cbgs.hpp"
#include "perceval/dataops/points_io.hpp"
#include "perceval/dataops/voxel.hpp"
#include "perceval/ensemble/ensemble.hpp"
#include "perceval/ensemble/manifest.hpp"
#include "perceval/geometry/geometry.hpp"
#include "perceval/geometry/nms.hpp"
#include "perceval/geometry/tta.hpp"
#include "perceval/metrics/detection.hpp"
#include "perceval/metrics/forecasting.hpp"
#include "perceval/metrics/hungarian.hpp"
#include "perceval/metrics/tracking.hpp"
#include "perceval/synth/scene.hpp"

using namespace perceval;
using core::Box3D;
using core::FrameSet;
using core::Kind;
using core::Rng;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failure; later ones only flip the flag.
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- binary --

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

int run_binary(const std::vector<std::string>& args, const fs::path& log) {
  std::string cmd = quote(PERCEVAL_BIN);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >" + quote(log.string()) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("perceval_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// ------------------------------------------------------------ criterion 1 --

Outcome perfect_fixed_point() {
  Outcome o;
  const auto dir = fresh_dir("fixed_point");
  const auto t0 = std::chrono::steady_clock::now();
  int seeds = 0;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto run_dir = dir / ("seed" + std::to_string(seed));
    fs::create_directories(run_dir);
    std::ofstream(run_dir / "spec.json")
        << json{{"seed", seed}, {"num_logs", 3}, {"agents_per_log", 20}}.dump();
    const auto log = run_dir / "log.txt";
    o.require(run_binary({"synth", "--spec", (run_dir / "spec.json").string(), "--out-dir",
                          run_dir.string()},
                         log) == 0,
              "synth failed for seed " + std::to_string(seed));
    const auto tracks = (run_dir / "model_tracks.jsonl").string();
    for (const char* task : {"detection", "tracking"}) {
      o.require(run_binary({"evaluate", task, "--gt", (run_dir / "gt_tracks.jsonl").string(),
                            "--pred", tracks, "--out",
                            (run_dir / (std::string(task) + ".json")).string()},
                           log) == 0,
                std::string("evaluate ") + task + " failed");
    }
    o.require(run_binary({"evaluate", "forecasting", "--gt",
                          (run_dir / "gt_futures.jsonl").string(), "--pred",
                          (run_dir / "model_forecasts.jsonl").string(), "--out",
                          (run_dir / "forecasting.json").string()},
                         log) == 0,
              "evaluate forecasting failed");
    if (!o.pass) break;

    auto near = [&](const json& v, double want, const std::string& what) {
      o.require(v.is_number() && std::abs(v.get<double>() - want) <= 1e-9,
                what + " = " + v.dump() + " for seed " + std::to_string(seed));
    };
    const auto det = read_json(run_dir / "detection.json");
    near(det["means"]["mAP"], 1.0, "mAP");
    near(det["means"]["mCDS"], 1.0, "mCDS");
    for (const auto& [cat, c] : det["per_category"].items()) {
      near(c["ap"], 1.0, cat + " AP");
      near(c["cds"], 1.0, cat + " CDS");
      near(c["ate"], 0.0, cat + " ATE");
      near(c["ase"], 0.0, cat + " ASE");
      near(c["aoe"], 0.0, cat + " AOE");
    }
    const auto trk = read_json(run_dir / "tracking.json");
    for (const auto& [cat, c] : trk["per_category"].items()) {
      near(c["hota"], 1.0, cat + " HOTA");
      near(c["amota"], 1.0, cat + " AMOTA");
      near(c["mota"], 1.0, cat + " MOTA");
    }
    const auto fc = read_json(run_dir / "forecasting.json");
    near(fc["means"]["mAP_F"], 1.0, "mAP_F");
    near(fc["means"]["ADE"], 0.0, "ADE");
    near(fc["means"]["FDE"], 0.0, "FDE");
    for (const auto& [cat, cohorts] : fc["per_category"].items()) {
      for (const auto& [cohort, cell] : cohorts.items()) {
        near(cell["map_f"], 1.0, cat + "/" + cohort + " mAP_F");
        near(cell["ade"], 0.0, cat + "/" + cohort + " ADE");
        near(cell["fde"], 0.0, cat + "/" + cohort + " FDE");
      }
    }
    ++seeds;
  }
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail = std::to_string(seeds) + " seeds, 3 logs x 20 agents, " + fmt(t) + " s";
  fs::remove_all(dir);
  return o;
}

// ------------------------------------------------------------ criterion 2 --

Outcome geometry_oracle() {
  Outcome o;
  Rng rng(2024), sampler(77);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Box3D a({rng.uniform(-1, 1), rng.uniform(-1, 1), 0}, {rng.uniform(0.5, 5), rng.uniform(0.5, 3), 1},
                  rng.uniform(-kPi, kPi), {}, 1.0, "PEDESTRIAN");
    const Box3D b({a.center.x + rng.uniform(-2, 2), a.center.y + rng.uniform(-2, 2), 0},
                  {rng.uniform(0.5, 5), rng.uniform(0.5, 3), 1}, rng.uniform(-kPi, kPi), {}, 1.0,
                  "PEDESTRIAN");
    worst = std::max(worst, std::abs(geometry::bev_iou(a, b) -
                                     oracle::monte_carlo_iou(a, b, 1000, sampler)));
  }
  o.require(worst <= 1e-3, "worst deviation " + fmt(worst));

  const auto sq = build::box(0, 0, 1, "PEDESTRIAN", {1, 1, 1});
  const auto rot = build::box(0, 0, 1, "PEDESTRIAN", {1, 1, 1}, kPi / 4);
  const double exact = geometry::bev_iou(sq, rot);
  const double mc = oracle::monte_carlo_iou(sq, rot, 3163, sampler);  // 1.0005e7 samples
  o.require(std::abs(exact - 0.70711) <= 1e-4, "45 degree IoU " + fmt(exact));
  o.require(std::abs(mc - 0.70711) <= 1e-4, "45 degree sampled IoU " + fmt(mc));
  if (o.pass) {
    o.detail = "1000 pairs, worst |diff| " + fmt(worst) + "; 45 degree " + fmt(exact) +
               " (sampled " + fmt(mc) + ")";
  }
  return o;
}

// ------------------------------------------------------------ criterion 3 --

Outcome assignment_oracle() {
  Outcome o;
  Rng rng(3);
  int exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(7), m = 1 + rng.below(7);
    metrics::CostMatrix c(n, m);
    const bool integral = trial < 500;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < m; ++k) {
        c(r, k) = integral ? static_cast<double>(rng.below(21)) - 5.0 : rng.uniform(-10, 10);
      }
    }
    const auto a = metrics::hungarian(c);
    const double got = metrics::assignment_cost(c, a), want = oracle::brute_force_assignment(c);
    o.require(a.size() == std::min(n, m), "assignment not maximal");
    // Integer costs sum exactly; real costs may differ in summation order only.
    if (integral) {
      o.require(got == want, "cost " + fmt(got) + " vs " + fmt(want));
      exact += got == want;
    } else {
      o.require(std::abs(got - want) <= 1e-12, "cost " + fmt(got) + " vs " + fmt(want));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(exact) + " integer matrices exact, 500 real within 1e-12, up to 7x7";
  }
  return o;
}

// ------------------------------------------------------------ criterion 4 --

Outcome metric_oracles() {
  Outcome o;
  metrics::MatchConfig cfg;
  double worst = 0.0;
  Rng rng(4);
  for (int s = 0; s < 200; ++s) {
    synth::SceneSpec spec;
    spec.seed = 10'000 + static_cast<std::uint64_t>(s);
    spec.num_logs = 1 + static_cast<int>(rng.below(2));
    spec.frames_per_log = 3 + static_cast<int>(rng.below(4));
    spec.agents_per_log = 4 + static_cast<int>(rng.below(8));
    synth::NoiseModel nm;
    nm.center_sigma = rng.uniform(0.0, 1.5);
    nm.size_sigma = rng.uniform(0.0, 0.2);
    nm.yaw_sigma = rng.uniform(0.0, 0.3);
    nm.score_noise = rng.uniform(0.0, 0.6);
    nm.drop_rate = rng.uniform(0.0, 0.4);
    nm.fp_rate = rng.uniform(0.0, 0.4);
    spec.models = {nm};
    const auto scene = synth::generate(spec);
    const auto& pred = scene.models[0].tracks;
    const auto m = metrics::detection_metrics(scene.gt_tracks, pred, cfg);
    const auto ref = synth::oracle_detection_ap(scene.gt_tracks, pred, cfg.distance_thresholds);
    o.require(ref.size() == m.per_category.size(), "category sets differ");
    for (const auto& [cat, c] : m.per_category) {
      const auto it = ref.find(cat);
      if (it == ref.end()) continue;
      worst = std::max(worst, std::abs(c.ap - it->second));
    }
  }
  o.require(worst <= 1e-9, "worst AP deviation " + fmt(worst));

  // 1 GT, 1 prediction 1.5 m away.
  {
    auto gt = build::frames(Kind::kDetection, {{build::key(1), {build::detection(build::box(0, 0))}}});
    auto pred = build::frames(Kind::kDetection,
                              {{build::key(1), {build::detection(build::box(1.5, 0))}}});
    const auto c = metrics::detection_metrics(gt, pred, cfg).per_category.at("PEDESTRIAN");
    o.require(c.ap == 0.5 && c.ate == 1.5, "offset case AP " + fmt(c.ap) + " ATE " + fmt(c.ate));
  }
  // Two tracks whose predicted identities swap in the second frame.
  {
    auto a = build::track(build::box(0, 0), 1), b = build::track(build::box(10, 0), 2);
    auto gt = build::frames(Kind::kTrack, {{build::key(1), {a, b}}, {build::key(2), {a, b}}});
    auto pred = build::frames(Kind::kTrack,
                              {{build::key(1), {build::track(build::box(0, 0), 11),
                                                build::track(build::box(10, 0), 12)}},
                               {build::key(2), {build::track(build::box(0, 0), 12),
                                                build::track(build::box(10, 0), 11)}}});
    const double mota = metrics::mota(gt, pred, cfg);
    o.require(mota == 0.5, "id swap MOTA " + fmt(mota));
  }
  // A two-frame track matched only in its first frame.
  {
    auto a = build::track(build::box(0, 0), 1);
    auto gt = build::frames(Kind::kTrack, {{build::key(1), {a}}, {build::key(2), {a}}});
    auto pred = build::frames(Kind::kTrack, {{build::key(1), {build::track(build::box(0, 0), 9)}}});
    const auto h = metrics::hota(gt, pred, cfg);
    bool every_alpha = true;
    for (const auto& pa : h.per_alpha) every_alpha = every_alpha && pa.hota == 0.5;
    o.require(every_alpha && std::abs(h.hota - 0.5) <= 1e-15, "half matched HOTA " + fmt(h.hota));
  }
  if (o.pass) {
    o.detail = "200 scenes, worst |AP diff| " + fmt(worst) +
               "; offset AP 0.5 ATE 1.5, swap MOTA 0.5, half-matched HOTA 0.5";
  }
  return o;
}

// ------------------------------------------------------------ criterion 5 --

bool same_geometry(const Box3D& a, const Box3D& b, double tol) {
  return std::abs(a.center.x - b.center.x) <= tol && std::abs(a.center.y - b.center.y) <= tol &&
         std::abs(a.center.z - b.center.z) <= tol && std::abs(a.size.x - b.size.x) <= tol &&
         std::abs(a.size.y - b.size.y) <= tol && std::abs(a.size.z - b.size.z) <= tol &&
         std::abs(a.velocity.x - b.velocity.x) <= tol &&
         std::abs(a.velocity.y - b.velocity.y) <= tol && geometry::yaw_error(a.yaw, b.yaw) <= tol &&
         a.category == b.category;
}

std::vector<Box3D> ordered(const core::Frame& f) {
  auto boxes = core::boxes_of(f);
  std::sort(boxes.begin(), boxes.end(), [](const Box3D& a, const Box3D& b) {
    return std::tie(a.category, a.center.x, a.center.y) < std::tie(b.category, b.center.x, b.center.y);
  });
  return boxes;
}

// Detector outputs are post-NMS: no two same-category boxes of one model
// overlap beyond the clustering threshold.
FrameSet detections_after_nms(const FrameSet& tracks, double thr) {
  FrameSet out;
  out.kind = Kind::kDetection;
  for (const auto& [key, frame] : tracks.frames) {
    core::Frame f;
    for (const auto& b : geometry::nms(core::boxes_of(frame), thr)) f.push_back(build::detection(b));
    out.frames.emplace(key, std::move(f));
  }
  return out;
}

Outcome ensemble_invariants() {
  Outcome o;
  const ensemble::EnsembleConfig cfg;
  o.require(std::abs(ensemble::speed_adaptive_threshold(10.0, cfg) - 6.0) <= 1e-9, "tau(10)");

  {
    const core::Vec3 car{4, 2, 1.5};
    auto a = build::box(0, 0, 0.6, "REGULAR_VEHICLE", car);
    auto b = build::box(1, 0, 0.4, "REGULAR_VEHICLE", car);
    std::vector<ensemble::ModelOutput> models{
        {"a", 1.0, build::frames(Kind::kDetection, {{build::key(1), {build::detection(a)}}})},
        {"b", 1.0, build::frames(Kind::kDetection, {{build::key(1), {build::detection(b)}}})}};
    const auto f = ensemble::wbf(models, cfg).frames.begin()->second;
    o.require(f.size() == 1 && std::abs(f[0].box.center.x - 0.4) <= 1e-9 &&
                  std::abs(f[0].box.center.y) <= 1e-9 && std::abs(f[0].box.center.z) <= 1e-9,
              "hand case fused center");
  }

  std::size_t frames_checked = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    synth::SceneSpec spec;
    spec.seed = 500 + seed;
    spec.num_logs = 1;
    spec.frames_per_log = 5;
    synth::NoiseModel n1, n2, n3;
    n1.id = "a";
    n2.id = "b";
    n3.id = "c";
    for (auto* n : {&n1, &n2, &n3}) {
      n->score_noise = 0.3;
      n->fp_rate = 0.2;
      n->drop_rate = 0.1;
      n->num_modes = 2;
      n->trajectory_sigma = 0.3;
    }
    n1.center_sigma = 0.3;
    n2.center_sigma = 0.5;
    n3.center_sigma = 0.8;
    n2.weight = 2.0;
    spec.models = {n1, n2, n3};
    const auto scene = synth::generate(spec);
    std::vector<ensemble::ModelOutput> models;
    for (const auto& m : scene.models) {
      models.push_back({m.id, m.weight, detections_after_nms(m.tracks, cfg.iou_cluster_threshold)});
    }

    // Single model: geometry and score unchanged.
    const auto single = ensemble::wbf(std::span(models.data(), 1), cfg);
    for (const auto& [key, frame] : models[0].frames.frames) {
      const auto got = ordered(single.frames.at(key)), want = ordered(frame);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = same_geometry(got[i], want[i], 1e-9) && std::abs(got[i].score - want[i].score) <= 1e-9;
      }
      o.require(same, "single-model identity");
      ++frames_checked;
    }

    // Identical inputs under different weights: output equals the input.
    std::vector<ensemble::ModelOutput> copies{models[1], models[1], models[1]};
    copies[0].weight = 0.5;
    copies[2].weight = 3.0;
    const auto consensus = ensemble::wbf(copies, cfg);
    for (const auto& [key, frame] : models[1].frames.frames) {
      const auto got = ordered(consensus.frames.at(key)), want = ordered(frame);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = same_geometry(got[i], want[i], 1e-9) && std::abs(got[i].score - want[i].score) <= 1e-9;
      }
      o.require(same, "consensus fixed point");
    }

    // Uniform score scaling: same clusters, hence the same fused geometry.
    Rng rng(seed);
    const double c = rng.uniform(0.05, 1.0);
    auto scaled = models;
    for (auto& m : scaled) {
      for (auto& [key, frame] : m.frames.frames) {
        for (auto& e : frame) e.box.score *= c;
      }
    }
    const auto base = ensemble::wbf(models, cfg), resc = ensemble::wbf(scaled, cfg);
    for (const auto& [key, frame] : base.frames) {
      const auto& other = resc.frames.at(key);
      bool same = frame.size() == other.size();
      for (std::size_t i = 0; same && i < frame.size(); ++i) {
        same = same_geometry(frame[i].box, other[i].box, 1e-9) &&
               std::abs(other[i].box.score - c * frame[i].box.score) <= 1e-9;
      }
      o.require(same, "score scaling changed a cluster");
    }
  }
  if (o.pass) {
    o.detail = "tau(10)=6, hand case center 0.4, identity/consensus/scaling on " +
               std::to_string(frames_checked) + " frames";
  }
  return o;
}

// ------------------------------------------------------------ criterion 6 --

Outcome tta_round_trip() {
  Outcome o;
  const auto transforms = geometry::default_tta_transforms();
  o.require(transforms.size() == 12, "expected 12 default transforms");
  Rng rng(6);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Box3D b({rng.uniform(-60, 60), rng.uniform(-60, 60), rng.uniform(-3, 3)},
                  {rng.uniform(0.3, 12), rng.uniform(0.3, 4), rng.uniform(0.5, 4)},
                  rng.uniform(-kPi, kPi), {rng.uniform(-20, 20), rng.uniform(-20, 20)},
                  rng.uniform(), "REGULAR_VEHICLE");
    for (const auto& t : transforms) {
      const auto r = geometry::invert_tta(geometry::apply_tta(b, t), t);
      const double d[] = {r.center.x - b.center.x, r.center.y - b.center.y, r.center.z - b.center.z,
                          r.size.x - b.size.x,     r.size.y - b.size.y,     r.size.z - b.size.z,
                          r.velocity.x - b.velocity.x, r.velocity.y - b.velocity.y,
                          geometry::yaw_error(r.yaw, b.yaw)};
      for (double x : d) worst = std::max(worst, std::abs(x));
    }
  }
  o.require(worst <= 1e-9, "worst round-trip error " + fmt(worst));

  // Each agent seen under all 12 transforms with a little detector jitter.
  std::size_t agents_total = 0;
  for (int trial = 0; trial < 20; ++trial) {
    core::Frame truth;
    const int agents = 5 + static_cast<int>(rng.below(10));
    for (int a = 0; a < agents; ++a) {
      truth.push_back(build::detection(Box3D({-40.0 + 9.0 * a, rng.uniform(-30, 30), 0.8},
                                             {4.5, 1.9, 1.6}, rng.uniform(-kPi, kPi), {}, 1.0,
                                             "REGULAR_VEHICLE")));
    }
    std::vector<std::pair<geometry::TtaTransform, FrameSet>> inputs;
    for (const auto& t : transforms) {
      core::Frame seen;
      for (const auto& e : truth) {
        Box3D b = geometry::apply_tta(e.box, t);
        b.center.x += 0.05 * rng.normal();
        b.center.y += 0.05 * rng.normal();
        b.score = rng.uniform(0.3, 1.0);
        seen.push_back(build::detection(b));
      }
      inputs.emplace_back(t, build::frames(Kind::kDetection, {{build::key(1), seen}}));
    }
    const auto merged = ensemble::tta_merge(inputs, 0.5).frames.begin()->second;
    bool one_each = merged.size() == truth.size();
    for (const auto& e : truth) {
      int near = 0;
      for (const auto& m : merged) near += geometry::center_distance(m.box, e.box) < 1.0;
      one_each = one_each && near == 1;
    }
    o.require(one_each, "tta_merge did not collapse to one box per agent");
    agents_total += truth.size();
  }
  if (o.pass) {
    o.detail = "1e4 boxes x 12 transforms, worst error " + fmt(worst) + "; " +
               std::to_string(agents_total) + " agents collapsed";
  }
  return o;
}

// ------------------------------------------------------------ criterion 7 --

std::vector<dataops::Point> cloud(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<dataops::Point> pts(n);
  for (auto& p : pts) {
    p = {static_cast<float>(rng.uniform(-60, 60)), static_cast<float>(rng.uniform(-60, 60)),
         static_cast<float>(rng.uniform(-4, 4)), static_cast<float>(rng.uniform())};
  }
  return pts;
}

Outcome voxelizer() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const dataops::VoxelGridConfig cfg;
  const auto dims = cfg.dims();
  o.require(dims == std::array<std::int64_t, 3>{1440, 1440, 30},
            "dims " + std::to_string(dims[0]) + "x" + std::to_string(dims[1]) + "x" +
                std::to_string(dims[2]));

  const auto pts = cloud(100000, 7);
  const auto grid = dataops::voxelize(pts, cfg);
  const auto& s = grid.stats();
  std::size_t stored = 0;
  for (const auto& v : grid.voxels()) stored += v.points.size();
  o.require(s.input == pts.size() && s.kept + s.overflow + s.out_of_range == s.input &&
                stored == s.kept,
            "points not conserved");

  std::map<std::array<std::int64_t, 3>, std::vector<std::size_t>> cells;
  std::vector<std::array<std::int64_t, 3>> order;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::array<std::int64_t, 3> idx{};
    if (!oracle::naive_bin(pts[i], cfg, idx)) {
      ++dropped;
      continue;
    }
    auto& members = cells[idx];
    if (members.empty()) order.push_back(idx);
    members.push_back(i);
  }
  bool same = dropped == s.out_of_range && order.size() == grid.voxels().size();
  for (std::size_t v = 0; same && v < order.size(); ++v) {
    const auto& vox = grid.voxels()[v];
    const auto& members = cells.at(order[v]);
    const std::size_t kept = std::min<std::size_t>(members.size(), 10);
    same = vox.index == order[v] && vox.points.size() == kept;
    for (std::size_t k = 0; same && k < kept; ++k) same = vox.points[k] == pts[members[k]];
  }
  o.require(same, "membership differs from naive binning");
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime " + fmt(t) + " s");

  // Throughput: best of three single-threaded passes over 1e6 points.
  const auto big = cloud(1'000'000, 8);
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t1 = std::chrono::steady_clock::now();
    const auto g = dataops::voxelize(big, cfg, 1);
    best = std::min(best, seconds_since(t1));
    o.require(g.stats().input == big.size(), "throughput run lost points");
  }
  const double rate = static_cast<double>(big.size()) / best;
  o.require(rate >= 1e6, "throughput " + fmt(rate) + " points/s");
  if (o.pass) {
    o.detail = "dims 1440x1440x30, 1e5-point oracle match in " + fmt(t) + " s, " +
               fmt(rate / 1e6) + "e6 points/s single-threaded";
  }
  return o;
}

// ------------------------------------------------------------ criterion 8 --

Outcome class_balance() {
  Outcome o;
  dataops::DatasetIndex index;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const std::string cat = i % 10 == 9 ? "BICYCLIST" : "REGULAR_VEHICLE";
    index.entries.push_back({build::key(i, "log"), {{cat, 1 + i % 3}}});
  }
  const auto weights = dataops::cbgs_weights(index);
  const std::size_t n = 1'000'000;
  const auto draws = dataops::resample_indices(weights, n, 8);
  std::map<std::string, double> seen;
  for (auto i : draws) {
    for (const auto& [cat, count] : index.entries[i].counts) seen[cat] += 1.0 / static_cast<double>(n);
  }
  const double common = seen["REGULAR_VEHICLE"], rare = seen["BICYCLIST"];
  const double gap = std::abs(common - rare) / std::max(common, rare);
  o.require(draws.size() == n, "draw count");
  o.require(gap <= 0.02, "relative gap " + fmt(gap));
  if (o.pass) {
    o.detail = "9:1 index, 1e6 draws: frequencies " + fmt(common) + " / " + fmt(rare) +
               " (relative gap " + fmt(gap) + ")";
  }
  return o;
}

// ------------------------------------------------------------ criterion 9 --

Outcome noise_monotonicity() {
  Outcome o;
  const std::vector<double> sigmas{0.0, 0.25, 0.5, 1.0};
  std::vector<double> ap(sigmas.size()), ade(sigmas.size());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      synth::SceneSpec spec;
      spec.seed = 9000 + seed;
      synth::NoiseModel nm;
      nm.center_sigma = sigmas[k];
      nm.size_sigma = 0.05;
      nm.yaw_sigma = 0.05;
      nm.score_noise = 0.2;
      nm.drop_rate = 0.1;
      nm.fp_rate = 0.1;
      nm.trajectory_sigma = 0.2;
      nm.num_modes = 3;
      spec.models = {nm};
      const auto scene = synth::generate(spec);
      ap[k] += metrics::detection_metrics(scene.gt_tracks, scene.models[0].tracks, {}).mean_ap / 20.0;
      const auto f = metrics::forecasting_metrics(scene.gt_futures, scene.models[0].forecasts, {});
      o.require(f.mean_ade.has_value(), "no ADE at sigma " + fmt(sigmas[k]));
      ade[k] += f.mean_ade.value_or(0.0) / 20.0;
    }
  }
  std::string table;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    table += (k ? ", " : "") + fmt(sigmas[k]) + ": AP " + fmt(ap[k]) + " ADE " + fmt(ade[k]);
    if (k > 0) {
      o.require(ap[k] <= ap[k - 1], "AP rose at sigma " + fmt(sigmas[k]) + " (" + table + ")");
      o.require(ade[k] >= ade[k - 1], "ADE fell at sigma " + fmt(sigmas[k]) + " (" + table + ")");
    }
  }
  if (o.pass) o.detail = "20 seeds; " + table;
  return o;
}

// ----------------------------------------------------------- criterion 10 --

// Runs every subcommand into `dir` and returns the produced files by name.
std::map<std::string, std::string> run_all_subcommands(const fs::path& dir, int threads,
                                                       Outcome& o) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string th = std::to_string(threads);
  const auto log = dir / "log.txt";
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), {"--threads", th});
    const int code = run_binary(args, log);
    o.require(code == 0, args[2] + " exited with " + std::to_string(code));
  };

  std::ofstream(dir / "spec.json") << R"({"seed": 41, "num_logs": 3, "agents_per_log": 20,
      "models": [
        {"id": "a", "center_sigma": 0.3, "score_noise": 0.3, "drop_rate": 0.1, "fp_rate": 0.1,
         "trajectory_sigma": 0.3, "num_modes": 3},
        {"id": "b", "weight": 2, "center_sigma": 0.6, "yaw_sigma": 0.1, "score_noise": 0.2,
         "drop_rate": 0.2, "fp_rate": 0.2, "trajectory_sigma": 0.5, "num_modes": 2}]})";
  const auto scene = dir / "scene";
  run({"synth", "--spec", (dir / "spec.json").string(), "--out-dir", scene.string()});
  const auto gt = (scene / "gt_tracks.jsonl").string();
  run({"evaluate", "detection", "--gt", gt, "--pred", (scene / "a_tracks.jsonl").string(), "--out",
       (dir / "eval_detection.json").string()});
  run({"evaluate", "tracking", "--gt", gt, "--pred", (scene / "b_tracks.jsonl").string(), "--out",
       (dir / "eval_tracking.json").string()});
  run({"evaluate", "forecasting", "--gt", (scene / "gt_futures.jsonl").string(), "--pred",
       (scene / "a_forecasts.jsonl").string(), "--out", (dir / "eval_forecasting.json").string()});
  run({"ensemble", "--manifest", (scene / "manifest.json").string(), "--out",
       (dir / "ensemble_forecasts.jsonl").string()});
  run({"ensemble", "--manifest", (scene / "manifest_detection.json").string(), "--out",
       (dir / "ensemble_detections.jsonl").string()});

  // TTA inputs: the detections of model a seen through two transforms.
  auto dets = core::read_frameset(scene / "a_tracks.jsonl", Kind::kTrack);
  for (auto& [key, frame] : dets.frames) {
    for (auto& e : frame) e.track_id.reset();
  }
  dets.kind = Kind::kDetection;
  core::write_frameset(geometry::apply_tta(dets, {1.05, true, false}), dir / "tta_a.jsonl");
  core::write_frameset(geometry::apply_tta(dets, {0.95, false, true}), dir / "tta_b.jsonl");
  std::ofstream(dir / "tta.json") << R"({"iou_threshold": 0.3, "inputs": [
      {"path": "tta_a.jsonl", "scale": 1.05, "flip_xz": true},
      {"path": "tta_b.jsonl", "scale": 0.95, "flip_yz": true}]})";
  run({"tta-merge", "--spec", (dir / "tta.json").string(), "--out", (dir / "tta_merged.jsonl").string()});

  dataops::write_points(cloud(300000, 10), dir / "cloud.bin");
  run({"voxelize", "--points", (dir / "cloud.bin").string(), "--out", (dir / "voxels.json").string()});

  std::ofstream(dir / "index.json")
      << dataops::index_to_json(dataops::index_from_frameset(core::read_frameset(gt, Kind::kTrack)))
             .dump();
  run({"resample", "--index", (dir / "index.json").string(), "-n", "5000", "--seed", "3", "--out",
       (dir / "resampled.json").string()});

  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path() == log) continue;
    files[fs::relative(entry.path(), dir).generic_string()] = read_bytes(entry.path());
  }
  return files;
}

Outcome determinism() {
  Outcome o;
  const auto root = fresh_dir("determinism");
  const auto one = run_all_subcommands(root / "t1", 1, o);
  const auto four = run_all_subcommands(root / "t4", 4, o);
  const auto again = run_all_subcommands(root / "t4_again", 4, o);
  o.require(one.size() >= 20, "only " + std::to_string(one.size()) + " output files");
  for (const auto& [name, bytes] : one) {
    const auto a = four.find(name), b = again.find(name);
    o.require(a != four.end() && a->second == bytes, name + " differs between 1 and 4 threads");
    o.require(b != again.end() && b->second == a->second, name + " differs between runs");
  }
  if (o.pass) {
    o.detail = std::to_string(one.size()) +
               " files byte-identical across threads 1/4 and repeated runs (9 invocations each)";
  }
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"perfect-prediction fixed point", perfect_fixed_point},
      {"geometry oracle", geometry_oracle},
      {"assignment oracle", assignment_oracle},
      {"metric oracle agreement", metric_oracles},
      {"ensemble invariants", ensemble_invariants},
      {"tta round trip", tta_round_trip},
      {"voxelizer", voxelizer},
      {"class-balanced sampling", class_balance},
      {"noise monotonicity", noise_monotonicity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds_since(t0));
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " "
              << criteria[i].first << " [" << timing << "] " << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
