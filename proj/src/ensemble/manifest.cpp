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

#include "perceval/ensemble/manifest.hpp"

#include "perceval/core/error.hpp"
#include "perceval/core/io.hpp"

namespace perceval::ensemble {

namespace {

using core::ValidationError;
using nlohmann::json;

double get_number(const json& j, const char* key) {
  if (!j.at(key).is_number()) {
    throw ValidationError(std::string("'") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

}  // namespace

std::string score_fusion_name(ScoreFusion f) {
  switch (f) {
    case ScoreFusion::kMean:
      return "mean";
    case ScoreFusion::kWeightedMean:
      return "weighted_mean";
    case ScoreFusion::kMax:
      return "max";
  }
  return "mean";
}

EnsembleConfig config_from_json(const json& j, EnsembleConfig cfg) {
  if (!j.is_object()) throw ValidationError("ensemble config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "iou_cluster_threshold") {
      cfg.iou_cluster_threshold = get_number(j, "iou_cluster_threshold");
    } else if (key == "traj_base_threshold") {
      cfg.traj_base_threshold = get_number(j, "traj_base_threshold");
    } else if (key == "traj_speed_coeff") {
      cfg.traj_speed_coeff = get_number(j, "traj_speed_coeff");
    } else if (key == "min_cluster_votes") {
      if (!value.is_number_integer()) {
        throw ValidationError("'min_cluster_votes' must be an integer");
      }
      cfg.min_cluster_votes = value.get<int>();
    } else if (key == "score_fusion") {
      const std::string name = value.is_string() ? value.get<std::string>() : "";
      if (name == "mean") {
        cfg.score_fusion = ScoreFusion::kMean;
      } else if (name == "weighted_mean") {
        cfg.score_fusion = ScoreFusion::kWeightedMean;
      } else if (name == "max") {
        cfg.score_fusion = ScoreFusion::kMax;
      } else {
        throw ValidationError("'score_fusion' must be mean, weighted_mean or max");
      }
    } else {
      throw ValidationError("unknown ensemble config field '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

nlohmann::ordered_json config_to_json(const EnsembleConfig& cfg) {
  nlohmann::ordered_json j;
  j["iou_cluster_threshold"] = cfg.iou_cluster_threshold;
  j["traj_base_threshold"] = cfg.traj_base_threshold;
  j["traj_speed_coeff"] = cfg.traj_speed_coeff;
  j["min_cluster_votes"] = cfg.min_cluster_votes;
  j["score_fusion"] = score_fusion_name(cfg.score_fusion);
  return j;
}

Manifest parse_manifest(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("models") || !j["models"].is_array()) {
    throw ValidationError("manifest needs a 'models' array");
  }
  Manifest m;
  for (const auto& jm : j["models"]) {
    if (!jm.is_object() || !jm.contains("id") || !jm["id"].is_string() ||
        !jm.contains("path") || !jm["path"].is_string()) {
      throw ValidationError("manifest model entries need string 'id' and 'path'");
    }
    ManifestModel model;
    model.id = jm["id"].get<std::string>();
    model.weight = jm.contains("weight") ? get_number(jm, "weight") : 1.0;
    if (!(model.weight > 0.0)) {
      throw ValidationError("model '" + model.id + "' has non-positive weight");
    }
    std::filesystem::path p = jm["path"].get<std::string>();
    model.path = p.is_absolute() ? p : base_dir / p;
    m.models.push_back(std::move(model));
  }
  if (m.models.empty()) throw ValidationError("manifest lists no models");
  if (j.contains("config")) m.config = config_from_json(j["config"]);
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  const std::string text = core::read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("manifest " + path.string() + ": " + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

nlohmann::ordered_json manifest_to_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["models"] = nlohmann::ordered_json::array();
  for (const auto& model : m.models) {
    nlohmann::ordered_json jm;
    jm["id"] = model.id;
    jm["weight"] = model.weight;
    jm["path"] = model.path.generic_string();
    j["models"].push_back(std::move(jm));
  }
  j["config"] = config_to_json(m.config);
  return j;
}

}  // namespace perceval::ensemble
