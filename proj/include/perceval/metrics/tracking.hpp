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

// CLEAR-MOT event counts accumulated over every frame of every log.
struct ClearCounts {
  std::size_t num_gt = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t idsw = 0;

  double mota() const;
};

struct HotaAtAlpha {
  double alpha = 0.0;
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
};

struct HotaScore {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  std::vector<HotaAtAlpha> per_alpha;
};

struct TrackingCategoryMetrics {
  HotaScore hota;
  ClearCounts clear;
  double mota = 0.0;
  double amota = 0.0;
};

struct TrackingMetrics {
  std::map<std::string, TrackingCategoryMetrics> per_category;
  double mean_hota = 0.0;
  double mean_deta = 0.0;
  double mean_assa = 0.0;
  double mean_mota = 0.0;
  double mean_amota = 0.0;
  std::vector<std::string> warnings;
};

// All three tracking scores per category (matching never crosses categories),
// averaged over categories present in `gt`. Throws ValidationError when `gt`
// holds no boxes, since every score is then undefined.
TrackingMetrics tracking_metrics(const core::FrameSet& gt,
                                 const core::FrameSet& pred,
                                 const MatchConfig& cfg, int threads = 1);

// Category means of the individual scores.
double mota(const core::FrameSet& gt, const core::FrameSet& pred,
            const MatchConfig& cfg);
HotaScore hota(const core::FrameSet& gt, const core::FrameSet& pred,
               const MatchConfig& cfg);
double amota(const core::FrameSet& gt, const core::FrameSet& pred,
             const MatchConfig& cfg);

}  // namespace perceval::metrics
