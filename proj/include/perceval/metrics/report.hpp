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

#include "json.hpp"
#include "perceval/metrics/detection.hpp"
#include "perceval/metrics/forecasting.hpp"
#include "perceval/metrics/tracking.hpp"

namespace perceval::metrics {

// JSON documents mirroring the result structs. Undefined values are null.
nlohmann::ordered_json to_json(const DetectionMetrics& m);
nlohmann::ordered_json to_json(const TrackingMetrics& m);
nlohmann::ordered_json to_json(const ForecastingMetrics& m);

// Aligned text tables: a summary row under the leaderboard headers
// (mCDS mAP mATE mASE mAOE / HOTA AMOTA MOTA / mAP_F ADE FDE) followed by a
// per-category breakdown.
std::string format_table(const DetectionMetrics& m);
std::string format_table(const TrackingMetrics& m);
std::string format_table(const ForecastingMetrics& m);

}  // namespace perceval::metrics
