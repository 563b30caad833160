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

#include "perceval/metrics/config.hpp"

#include <algorithm>

#include "perceval/core/error.hpp"

namespace perceval::metrics {

namespace {

using core::ValidationError;
using nlohmann::json;

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("'" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ValidationError("'" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

}  // namespace

std::vector<double> MatchConfig::default_hota_alphas() {
  std::vector<double> alphas;
  for (int i = 1; i <= 19; ++i) alphas.push_back(i * 5 / 100.0);
  return alphas;
}

void validate(const MatchConfig& cfg) {
  const auto& d = cfg.distance_thresholds;
  if (d.empty()) throw ValidationError("distance_thresholds must not be empty");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw ValidationError("distance_thresholds must be positive");
    if (i > 0 && !(d[i] > d[i - 1])) {
      throw ValidationError("distance_thresholds must be strictly ascending");
    }
  }
  if (!(cfg.tp_error_threshold > 0.0)) {
    throw ValidationError("tp_error_threshold must be positive");
  }
  if (cfg.hota_alphas.empty()) throw ValidationError("hota_alphas must not be empty");
  for (double a : cfg.hota_alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("hota_alphas must lie in (0, 1)");
  }
  if (cfg.amota_recall_samples < 1) {
    throw ValidationError("amota_recall_samples must be at least 1");
  }
  if (!(cfg.cds_ate_norm > 0.0 && cfg.cds_ase_norm > 0.0 && cfg.cds_aoe_norm > 0.0)) {
    throw ValidationError("CDS normalizers must be positive");
  }
  if (!(cfg.static_speed_threshold > 0.0 && cfg.linear_deviation_threshold > 0.0)) {
    throw ValidationError("cohort thresholds must be positive");
  }
}

MatchConfig match_config_from_json(const json& j, MatchConfig cfg) {
  if (!j.is_object()) throw ValidationError("match config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "distance_thresholds") {
      cfg.distance_thresholds = number_list(value, key);
    } else if (key == "tp_error_threshold") {
      cfg.tp_error_threshold = number(value, key);
    } else if (key == "hota_alphas") {
      cfg.hota_alphas = number_list(value, key);
    } else if (key == "amota_recall_samples") {
      if (!value.is_number_integer()) {
        throw ValidationError("'amota_recall_samples' must be an integer");
      }
      cfg.amota_recall_samples = value.get<int>();
    } else if (key == "hota_similarity") {
      const std::string s = value.is_string() ? value.get<std::string>() : "";
      if (s == "center_distance") {
        cfg.hota_similarity = HotaSimilarity::kCenterDistance;
      } else if (s == "bev_iou") {
        cfg.hota_similarity = HotaSimilarity::kBevIou;
      } else {
        throw ValidationError("'hota_similarity' must be center_distance or bev_iou");
      }
    } else if (key == "cds_ate_norm") {
      cfg.cds_ate_norm = number(value, key);
    } else if (key == "cds_ase_norm") {
      cfg.cds_ase_norm = number(value, key);
    } else if (key == "cds_aoe_norm") {
      cfg.cds_aoe_norm = number(value, key);
    } else if (key == "static_speed_threshold") {
      cfg.static_speed_threshold = number(value, key);
    } else if (key == "linear_deviation_threshold") {
      cfg.linear_deviation_threshold = number(value, key);
    } else {
      throw ValidationError("unknown match config field '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

nlohmann::ordered_json match_config_to_json(const MatchConfig& cfg) {
  nlohmann::ordered_json j;
  j["distance_thresholds"] = cfg.distance_thresholds;
  j["tp_error_threshold"] = cfg.tp_error_threshold;
  j["hota_alphas"] = cfg.hota_alphas;
  j["amota_recall_samples"] = cfg.amota_recall_samples;
  j["hota_similarity"] = cfg.hota_similarity == HotaSimilarity::kBevIou
                             ? "bev_iou"
                             : "center_distance";
  j["cds_ate_norm"] = cfg.cds_ate_norm;
  j["cds_ase_norm"] = cfg.cds_ase_norm;
  j["cds_aoe_norm"] = cfg.cds_aoe_norm;
  j["static_speed_threshold"] = cfg.static_speed_threshold;
  j["linear_deviation_threshold"] = cfg.linear_deviation_threshold;
  return j;
}

}  // namespace perceval::metrics
