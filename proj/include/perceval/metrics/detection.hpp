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

#include <map>
#include <string>
#include <vector>

#include "perceval/core/types.hpp"
#include "perceval/metrics/config.hpp"

namespace perceval::metrics {

struct DetectionCategoryMetrics {
  double ap = 0.0;
  // AP at each configured distance threshold, in config order.
  std::vector<double> ap_per_threshold;
  double ate = 0.0;
  double ase = 0.0;
  double aoe = 0.0;
  double cds = 0.0;
  std::size_t num_gt = 0;
  std::size_t num_pred = 0;
  // True positives at tp_error_threshold (the population of the TP errors).
  std::size_t num_tp = 0;
};

struct DetectionMetrics {
  std::map<std::string, DetectionCategoryMetrics> per_category;
  double mean_ap = 0.0;
  double mean_ate = 0.0;
  double mean_ase = 0.0;
  double mean_aoe = 0.0;
  double mean_cds = 0.0;
  std::vector<std::string> warnings;
};

// Per-category AP over center-distance thresholds, TP errors, and CDS.
// Categories are those present in `gt`; predictions of other categories are
// reported in `warnings` and otherwise ignored. When a category has no true
// positive at tp_error_threshold its TP errors take their normalizer values.
DetectionMetrics detection_metrics(const core::FrameSet& gt,
                                   const core::FrameSet& pred,
                                   const MatchConfig& cfg);

// Geometric mean of the per-axis size ratios min/max; 1 for equal sizes.
double aligned_size_similarity(const core::Vec3& a, const core::Vec3& b);

}  // namespace perceval::metrics
