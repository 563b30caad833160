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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "perceval/core/types.hpp"
#include "perceval/ensemble/ensemble.hpp"

namespace perceval::synth {

// Perturbation applied by one simulated model to the ground truth.
struct NoiseModel {
  std::string id = "model";
  double weight = 1.0;
  double center_sigma = 0.0;  // m, per BEV axis
  double size_sigma = 0.0;    // log-scale, per axis
  double yaw_sigma = 0.0;     // rad
  // Spread subtracted from the error-derived score; 0 keeps scores
  // a deterministic function of the perturbation.
  double score_noise = 0.0;
  double drop_rate = 0.0;
  // Expected false positives per ground-truth agent and frame.
  double fp_rate = 0.0;
  double trajectory_sigma = 0.0;  // m per step, random-walk increments
  int num_modes = 1;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int num_logs = 3;
  int frames_per_log = 30;
  int agents_per_log = 20;
  int horizon = 6;
  double step_period = 0.5;
  // Category name -> fraction of agents.
  std::map<std::string, double> categories{
      {"REGULAR_VEHICLE", 0.5}, {"PEDESTRIAN", 0.3}, {"BICYCLIST", 0.2}};
  double static_fraction = 0.3;
  double linear_fraction = 0.4;
  double turning_fraction = 0.3;
  std::vector<NoiseModel> models{NoiseModel{}};

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

// Throws ValidationError when fractions do not sum to 1, a sigma is
// negative, a rate leaves [0, 1], or a category is unknown.
void validate(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json scene_spec_to_json(const SceneSpec& spec);

struct SimulatedModel {
  std::string id;
  double weight = 1.0;
  core::FrameSet tracks;     // Kind::kTrack
  core::FrameSet forecasts;  // Kind::kForecast
};

struct Scene {
  core::FrameSet gt_tracks;   // Kind::kTrack
  core::FrameSet gt_futures;  // Kind::kForecast, one mode: the realized future
  std::vector<SimulatedModel> models;
};

// Pure in `spec`: logs are generated from derived seeds, so the result does
// not depend on `threads`.
Scene generate(const SceneSpec& spec, int threads = 1);

std::vector<ensemble::ModelOutput> track_outputs(const Scene& scene);
std::vector<ensemble::ModelOutput> forecast_outputs(const Scene& scene);

// Reference AP per ground-truth category, averaged over `thresholds`.
// Written independently of the metrics module for cross-checking.
std::map<std::string, double> oracle_detection_ap(const core::FrameSet& gt,
                                                  const core::FrameSet& pred,
                                                  const std::vector<double>& thresholds);

}  // namespace perceval::synth
