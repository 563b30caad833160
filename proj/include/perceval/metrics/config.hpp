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

#include <string>
#include <vector>

#include "json.hpp"

namespace perceval::metrics {

enum class HotaSimilarity { kCenterDistance, kBevIou };

struct MatchConfig {
  // Center-distance thresholds (m) averaged into AP and mAP_F.
  std::vector<double> distance_thresholds{0.5, 1.0, 2.0, 4.0};
  // Match radius for TP errors, MOTA/AMOTA gating, ADE/FDE and the distance
  // similarity of HOTA.
  double tp_error_threshold = 2.0;
  std::vector<double> hota_alphas = default_hota_alphas();
  int amota_recall_samples = 40;
  HotaSimilarity hota_similarity = HotaSimilarity::kCenterDistance;

  // Normalizers mapping ATE / ASE / AOE into [0, 1] for CDS.
  double cds_ate_norm = 2.0;
  double cds_ase_norm = 1.0;
  double cds_aoe_norm = 3.14159265358979323846;

  // Cohort rules on the ground-truth future.
  double static_speed_threshold = 0.5;
  double linear_deviation_threshold = 1.0;

  static std::vector<double> default_hota_alphas();
};

// Throws ValidationError on empty or unsorted thresholds, non-positive
// values, alphas outside (0, 1), or fewer than one recall sample.
void validate(const MatchConfig& cfg);

MatchConfig match_config_from_json(const nlohmann::json& j, MatchConfig base = {});
nlohmann::ordered_json match_config_to_json(const MatchConfig& cfg);

}  // namespace perceval::metrics
