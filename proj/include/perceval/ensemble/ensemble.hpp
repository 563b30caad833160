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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perceval/core/types.hpp"
#include "perceval/geometry/tta.hpp"

namespace perceval::ensemble {

enum class ScoreFusion { kMean, kWeightedMean, kMax };

struct EnsembleConfig {
  // A box joins a cluster when its BEV IoU with the cluster's fused box is
  // strictly greater than this.
  double iou_cluster_threshold = 0.5;
  // Trajectory merge radius tau(v) = traj_base_threshold + traj_speed_coeff * v
  // with v the fused detection speed in m/s.
  double traj_base_threshold = 1.0;
  double traj_speed_coeff = 0.5;
  int min_cluster_votes = 1;
  ScoreFusion score_fusion = ScoreFusion::kMean;

  friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

// Throws ValidationError on out-of-range fields.
void validate(const EnsembleConfig& cfg);

struct ModelOutput {
  std::string model_id;
  double weight = 1.0;
  core::FrameSet frames;
};

// Per frame: invert each transform, concatenate in input order, then NMS.
// All inputs must carry the same frame keys and the same (non-track) kind.
core::FrameSet tta_merge(
    std::span<const std::pair<geometry::TtaTransform, core::FrameSet>> outputs,
    double iou_threshold, int threads = 1);

// Weighted Box Fusion on rotated boxes. Output kind is detection; each frame
// is sorted by descending fused score.
core::FrameSet wbf(std::span<const ModelOutput> models,
                   const EnsembleConfig& cfg, int threads = 1);

// Two-step ensemble: detections are clustered and fused exactly as in wbf,
// then the member trajectories of each detection cluster are clustered by
// mean waypoint L2 distance under the speed-adaptive radius and fused into
// modes. Output kind is forecast.
core::FrameSet ensemble_forecasts(std::span<const ModelOutput> models,
                                  const EnsembleConfig& cfg, int threads = 1);

double speed_adaptive_threshold(double speed, const EnsembleConfig& cfg);

// Mean over waypoints of the pointwise Euclidean distance. Horizons must
// match.
double mean_l2_distance(const core::Trajectory& a, const core::Trajectory& b);

}  // namespace perceval::ensemble
