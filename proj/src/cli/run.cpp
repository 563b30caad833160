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

#include "perceval/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "perceval/core/error.hpp"
#include "perceval/core/io.hpp"
#include "perceval/core/validate.hpp"
#include "perceval/dataops/cbgs.hpp"
#include "perceval/dataops/points_io.hpp"
#include "perceval/dataops/voxel.hpp"
#include "perceval/ensemble/ensemble.hpp"
#include "perceval/ensemble/manifest.hpp"
#include "perceval/metrics/config.hpp"
#include "perceval/metrics/report.hpp"
#include "perceval/synth/scene.hpp"

namespace perceval::cli {

namespace {

namespace fs = std::filesystem;
using core::FrameSet;
using core::Kind;
using core::ValidationError;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Options {
  int threads = 1;
  std::string summary_path;

  std::string task;
  std::string gt, pred, config, out;
  std::string manifest;
  std::string spec;
  std::string points;
  std::string index;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
};

// Filled by each command and echoed in the run summary.
struct Summary {
  ordered_json config = ordered_json::object();
  ordered_json inputs = ordered_json::object();
  ordered_json outputs = ordered_json::array();
  ordered_json stats = ordered_json::object();
};

json parse_json_file(const fs::path& path) {
  const std::string text = core::read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

FrameSet load(const fs::path& path, Kind kind, const std::string& what) {
  FrameSet fs = core::read_frameset(path, kind);
  core::require_valid(fs, what + " (" + path.string() + ")");
  return fs;
}

void write_json(const fs::path& path, const ordered_json& j) {
  core::write_text_atomic(path, j.dump(2) + "\n");
}

void cmd_evaluate(const Options& o, Summary& s, std::ostream& out) {
  metrics::MatchConfig cfg;
  if (!o.config.empty()) cfg = metrics::match_config_from_json(parse_json_file(o.config));
  metrics::validate(cfg);
  s.config = metrics::match_config_to_json(cfg);
  s.inputs["gt"] = o.gt;
  s.inputs["pred"] = o.pred;

  ordered_json report;
  std::string table;
  if (o.task == "detection") {
    const FrameSet gt = load(o.gt, core::sniff_kind(o.gt), "ground truth");
    const FrameSet pred = load(o.pred, core::sniff_kind(o.pred), "predictions");
    const auto m = metrics::detection_metrics(gt, pred, cfg);
    report = metrics::to_json(m);
    table = metrics::format_table(m);
  } else if (o.task == "tracking") {
    const FrameSet gt = load(o.gt, Kind::kTrack, "ground truth");
    const FrameSet pred = load(o.pred, Kind::kTrack, "predictions");
    const auto m = metrics::tracking_metrics(gt, pred, cfg, o.threads);
    report = metrics::to_json(m);
    table = metrics::format_table(m);
  } else {
    const FrameSet gt = load(o.gt, Kind::kForecast, "ground truth");
    const FrameSet pred = load(o.pred, Kind::kForecast, "predictions");
    const auto m = metrics::forecasting_metrics(gt, pred, cfg);
    report = metrics::to_json(m);
    table = metrics::format_table(m);
  }
  write_json(o.out, report);
  s.outputs.push_back(o.out);
  s.stats["means"] = report["means"];
  out << table;
}

void cmd_ensemble(const Options& o, Summary& s) {
  const auto manifest = ensemble::read_manifest(o.manifest);
  if (manifest.models.empty()) throw ValidationError("manifest lists no models");
  ensemble::validate(manifest.config);
  s.config = ensemble::manifest_to_json(manifest);
  s.inputs["manifest"] = o.manifest;

  const Kind kind = core::sniff_kind(manifest.models.front().path);
  std::vector<ensemble::ModelOutput> models;
  for (const auto& m : manifest.models) {
    models.push_back({m.id, m.weight, load(m.path, kind, "model '" + m.id + "'")});
  }
  const FrameSet fused = kind == Kind::kForecast
                             ? ensemble::ensemble_forecasts(models, manifest.config, o.threads)
                             : ensemble::wbf(models, manifest.config, o.threads);
  core::write_frameset(fused, o.out);
  s.outputs.push_back(o.out);
  s.stats["mode"] = kind == Kind::kForecast ? "two_step" : "wbf";
  s.stats["frames"] = fused.frames.size();
  s.stats["entries"] = fused.num_entries();
}

void cmd_tta_merge(const Options& o, Summary& s) {
  const json spec = parse_json_file(o.spec);
  if (!spec.is_object() || !spec.contains("inputs") || !spec["inputs"].is_array()) {
    throw ValidationError("tta spec needs an 'inputs' array");
  }
  double iou = 0.5;
  for (const auto& [key, v] : spec.items()) {
    if (key == "iou_threshold") {
      if (!v.is_number()) throw ValidationError("'iou_threshold' must be a number");
      iou = v.get<double>();
    } else if (key != "inputs") {
      throw ValidationError("unknown tta spec field '" + key + "'");
    }
  }
  if (spec["inputs"].empty()) throw ValidationError("tta spec lists no inputs");

  const fs::path base = fs::path(o.spec).parent_path();
  std::vector<std::pair<geometry::TtaTransform, FrameSet>> outputs;
  std::optional<Kind> kind;
  ordered_json echo = ordered_json::array();
  for (const auto& in : spec["inputs"]) {
    if (!in.is_object() || !in.contains("path") || !in["path"].is_string()) {
      throw ValidationError("each tta input needs a 'path'");
    }
    geometry::TtaTransform t;
    for (const auto& [key, v] : in.items()) {
      if (key == "path") continue;
      if (key == "scale") {
        if (!v.is_number()) throw ValidationError("'scale' must be a number");
        t.scale = v.get<double>();
      } else if (key == "flip_xz" || key == "flip_yz") {
        if (!v.is_boolean()) throw ValidationError("'" + key + "' must be a boolean");
        (key == "flip_xz" ? t.flip_xz : t.flip_yz) = v.get<bool>();
      } else {
        throw ValidationError("unknown tta input field '" + key + "'");
      }
    }
    if (!(t.scale > 0.0)) throw ValidationError("tta scale must be positive");
    fs::path p = in["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    if (!kind) kind = core::sniff_kind(p);
    outputs.emplace_back(t, load(p, *kind, "tta input " + p.string()));
    echo.push_back({{"path", p.generic_string()},
                    {"scale", t.scale},
                    {"flip_xz", t.flip_xz},
                    {"flip_yz", t.flip_yz}});
  }
  s.config["iou_threshold"] = iou;
  s.config["inputs"] = std::move(echo);
  s.inputs["spec"] = o.spec;

  const FrameSet merged = ensemble::tta_merge(outputs, iou, o.threads);
  core::write_frameset(merged, o.out);
  s.outputs.push_back(o.out);
  s.stats["entries"] = merged.num_entries();
}

void cmd_voxelize(const Options& o, Summary& s) {
  dataops::VoxelGridConfig cfg;
  if (!o.config.empty()) cfg = dataops::voxel_config_from_json(parse_json_file(o.config));
  dataops::validate(cfg);
  s.config = dataops::voxel_config_to_json(cfg);
  s.inputs["points"] = o.points;

  const auto points = dataops::read_points(o.points);
  const auto grid = dataops::voxelize(points, cfg, o.threads);
  const ordered_json summary = dataops::voxel_summary(grid);
  write_json(o.out, summary);
  s.outputs.push_back(o.out);
  s.stats = summary;
}

void cmd_resample(const Options& o, Summary& s) {
  if (o.n < 1) throw ValidationError("-n must be at least 1");
  s.config["n"] = o.n;
  s.config["seed"] = o.seed;
  s.inputs["index"] = o.index;

  const auto index = dataops::index_from_json(parse_json_file(o.index));
  const auto weights = dataops::cbgs_weights(index);
  const auto draws = dataops::resample_indices(weights, o.n, o.seed);

  ordered_json j;
  j["n"] = o.n;
  j["seed"] = o.seed;
  j["weights"] = weights;
  j["samples"] = ordered_json::array();
  for (std::size_t i : draws) {
    j["samples"].push_back({{"log_id", index.entries[i].key.log_id},
                            {"timestamp_ns", index.entries[i].key.timestamp_ns}});
  }
  write_json(o.out, j);
  s.outputs.push_back(o.out);
  s.stats["entries"] = index.entries.size();
  s.stats["draws"] = draws.size();
}

void cmd_synth(const Options& o, Summary& s) {
  synth::SceneSpec spec = synth::scene_spec_from_json(parse_json_file(o.spec));
  if (o.seed_given) spec.seed = o.seed;
  synth::validate(spec);
  s.config = synth::scene_spec_to_json(spec);
  s.inputs["spec"] = o.spec;

  const auto scene = synth::generate(spec, o.threads);
  const fs::path dir = o.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw core::IoError("cannot create " + dir.string() + ": " + ec.message());

  auto emit = [&](const FrameSet& fs, const std::string& name) {
    core::write_frameset(fs, dir / name);
    s.outputs.push_back((dir / name).generic_string());
  };
  emit(scene.gt_tracks, "gt_tracks.jsonl");
  emit(scene.gt_futures, "gt_futures.jsonl");
  ensemble::Manifest forecasts, detections;
  for (const auto& m : scene.models) {
    emit(m.tracks, m.id + "_tracks.jsonl");
    emit(m.forecasts, m.id + "_forecasts.jsonl");
    forecasts.models.push_back({m.id, m.weight, m.id + "_forecasts.jsonl"});
    detections.models.push_back({m.id, m.weight, m.id + "_tracks.jsonl"});
  }
  write_json(dir / "manifest.json", ensemble::manifest_to_json(forecasts));
  write_json(dir / "manifest_detection.json", ensemble::manifest_to_json(detections));
  s.outputs.push_back((dir / "manifest.json").generic_string());
  s.outputs.push_back((dir / "manifest_detection.json").generic_string());
  s.stats["frames"] = scene.gt_tracks.frames.size();
  s.stats["gt_entries"] = scene.gt_tracks.num_entries();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Options o;

  CLI::App app{"Perception post-processing, ensembling and evaluation toolkit", "perceval"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker threads (default: $PERCEVAL_THREADS or 1)")
      ->envname("PERCEVAL_THREADS")
      ->check(CLI::Range(1, 1024));
  app.add_option("--summary", o.summary_path, "Also write the run summary JSON to this file");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("task", o.task, "detection | tracking | forecasting")
      ->required()
      ->check(CLI::IsMember({"detection", "tracking", "forecasting"}));
  evaluate->add_option("--gt", o.gt, "Ground-truth JSON-lines file")->required();
  evaluate->add_option("--pred", o.pred, "Prediction JSON-lines file")->required();
  evaluate->add_option("--config", o.config, "Metric configuration JSON");
  evaluate->add_option("--out", o.out, "Report JSON output")->required();

  auto* ens = app.add_subcommand("ensemble", "Fuse several models listed in a manifest");
  ens->add_option("--manifest", o.manifest, "Ensemble manifest JSON")->required();
  ens->add_option("--out", o.out, "Fused JSON-lines output")->required();

  auto* tta = app.add_subcommand("tta-merge", "Merge test-time-augmented outputs");
  tta->add_option("--spec", o.spec, "TTA merge spec JSON")->required();
  tta->add_option("--out", o.out, "Merged JSON-lines output")->required();

  auto* vox = app.add_subcommand("voxelize", "Voxelize a point cloud");
  vox->add_option("--points", o.points, "Binary point file (with .json header)")->required();
  vox->add_option("--config", o.config, "Voxel grid configuration JSON");
  vox->add_option("--out", o.out, "Voxel summary JSON output")->required();

  auto* res = app.add_subcommand("resample", "Class-balanced resampling of a dataset index");
  res->add_option("--index", o.index, "Dataset index JSON")->required();
  res->add_option("-n", o.n, "Number of draws")->required();
  res->add_option("--seed", o.seed, "Random seed")->required();
  res->add_option("--out", o.out, "Resampled index JSON output")->required();

  auto* syn = app.add_subcommand("synth", "Generate a synthetic scene and model outputs");
  syn->add_option("--spec", o.spec, "Scene spec JSON")->required();
  syn->add_option("--out-dir", o.out_dir, "Output directory")->required();
  syn->add_option("--seed", o.seed, "Override the spec seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }
  o.seed_given = syn->parsed() && syn->count("--seed") > 0;

  CLI::App* chosen = app.get_subcommands().front();
  Summary s;
  int code = kExitOk;
  std::string message;
  try {
    if (chosen == evaluate) {
      cmd_evaluate(o, s, out);
    } else if (chosen == ens) {
      cmd_ensemble(o, s);
    } else if (chosen == tta) {
      cmd_tta_merge(o, s);
    } else if (chosen == vox) {
      cmd_voxelize(o, s);
    } else if (chosen == res) {
      cmd_resample(o, s);
    } else {
      cmd_synth(o, s);
    }
  } catch (const core::IoError& e) {
    code = kExitIo;
    message = e.what();
  } catch (const fs::filesystem_error& e) {
    code = kExitIo;
    message = e.what();
  } catch (const std::exception& e) {
    // ValidationError, ParseError and malformed JSON all land here.
    code = kExitValidation;
    message = e.what();
  }
  if (code != kExitOk) err << "error: " << message << "\n";

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ordered_json summary;
  summary["command"] = chosen->get_name() + (o.task.empty() ? "" : " " + o.task);
  summary["status"] = code == kExitOk ? "ok" : "error";
  summary["exit_code"] = code;
  if (code != kExitOk) summary["error"] = message;
  summary["threads"] = o.threads;
  summary["config"] = std::move(s.config);
  summary["inputs"] = std::move(s.inputs);
  summary["outputs"] = std::move(s.outputs);
  summary["stats"] = std::move(s.stats);
  summary["wall_time_s"] = wall;
  out << summary.dump() << "\n";
  if (!o.summary_path.empty()) {
    try {
      write_json(o.summary_path, summary);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      if (code == kExitOk) code = kExitIo;
    }
  }
  return code;
}

}  // namespace perceval::cli
