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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "perceval/ensemble/ensemble.hpp"

namespace perceval::ensemble {

// {"models": [{"id": str, "weight": f, "path": str}], "config": {...}}
// Relative model paths resolve against the manifest's directory.
struct ManifestModel {
  std::string id;
  double weight = 1.0;
  std::filesystem::path path;
};

struct Manifest {
  std::vector<ManifestModel> models;
  EnsembleConfig config;
};

Manifest parse_manifest(const nlohmann::json& j,
                        const std::filesystem::path& base_dir);
Manifest read_manifest(const std::filesystem::path& path);
nlohmann::ordered_json manifest_to_json(const Manifest& m);

// Unknown keys are rejected so typos surface as validation errors.
EnsembleConfig config_from_json(const nlohmann::json& j,
                                EnsembleConfig base = {});
nlohmann::ordered_json config_to_json(const EnsembleConfig& cfg);

std::string score_fusion_name(ScoreFusion f);

}  // namespace perceval::ensemble
