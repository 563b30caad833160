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

#include "perceval/core/types.hpp"

#include <numeric>

namespace perceval::core {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kGroundTruth:
      return "ground_truth";
    case Kind::kDetection:
      return "detection";
    case Kind::kTrack:
      return "track";
    case Kind::kForecast:
      return "forecast";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  if (name == "ground_truth") return Kind::kGroundTruth;
  if (name == "detection") return Kind::kDetection;
  if (name == "track") return Kind::kTrack;
  if (name == "forecast") return Kind::kForecast;
  return std::nullopt;
}

std::string to_string(const FrameKey& key) {
  return key.log_id + "@" + std::to_string(key.timestamp_ns);
}

std::size_t FrameSet::num_entries() const {
  return std::accumulate(
      frames.begin(), frames.end(), std::size_t{0},
      [](std::size_t acc, const auto& kv) { return acc + kv.second.size(); });
}

std::vector<Box3D> boxes_of(const Frame& frame) {
  std::vector<Box3D> out;
  out.reserve(frame.size());
  for (const auto& e : frame) out.push_back(e.box);
  return out;
}

}  // namespace perceval::core
