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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perceval/core/types.hpp"
#include "perceval/metrics/config.hpp"

namespace perceval::metrics {

enum class Cohort { kStatic = 0, kLinear = 1, kNonlinear = 2 };

inline constexpr std::array<Cohort, 3> kAllCohorts{Cohort::kStatic, Cohort::kLinear,
                                                   Cohort::kNonlinear};

std::string_view cohort_name(Cohort c);

// Static when the mean speed along start -> waypoints is below
// cfg.static_speed_threshold; linear when no waypoint strays from the
// constant-velocity extrapolation of the first step by
// cfg.linear_deviation_threshold or more; nonlinear otherwise.
Cohort classify_cohort(core::Vec2 start, const core::Trajectory& future,
                       const MatchConfig& cfg);

struct ForecastCell {
  double map_f = 0.0;
  std::vector<double> ap_per_threshold;
  // Empty when no prediction matched at tp_error_threshold.
  std::optional<double> ade;
  std::optional<double> fde;
  std::size_t num_gt = 0;
  std::size_t num_pred = 0;
  std::size_t num_matched = 0;
};

struct ForecastingMetrics {
  // category -> cohort -> cell; only cells with ground truth or predictions.
  std::map<std::string, std::map<Cohort, ForecastCell>> cells;
  // Means over (category, cohort) cells holding at least one ground truth;
  // ADE/FDE additionally require at least one match.
  double mean_map_f = 0.0;
  std::optional<double> mean_ade;
  std::optional<double> mean_fde;
  std::vector<std::string> warnings;
};

// Ground-truth entries carry the realized future as their first mode.
// Predictions are assigned a cohort from their highest-scoring mode and
// matched only against ground truth of the same category and cohort. A
// prediction is a true positive at threshold d when its detection is the
// greedy match of a ground truth within d and its minimum-FDE mode ends
// within d of the ground-truth endpoint. Throws ValidationError on horizon
// mismatch.
ForecastingMetrics forecasting_metrics(const core::FrameSet& gt,
                                       const core::FrameSet& pred,
                                       const MatchConfig& cfg);

}  // namespace perceval::metrics
