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

#include <algorithm>
#include <cmath>
#include <tuple>

#include "perceval/synth/scene.hpp"

namespace perceval::synth {

// Deliberately naive: every threshold rescans all ground truth of the
// prediction's frame, and AP is read off the precision/recall table one
// recall step at a time.
std::map<std::string, double> oracle_detection_ap(const core::FrameSet& gt,
                                                  const core::FrameSet& pred,
                                                  const std::vector<double>& thresholds) {
  std::map<std::string, double> result;
  std::map<std::string, std::size_t> gt_count;
  for (const auto& [key, frame] : gt.frames) {
    for (const auto& e : frame) ++gt_count[e.box.category];
  }

  for (const auto& [category, total] : gt_count) {
    // (score, frame key, position in frame) sorted by score, then input order.
    using Candidate = std::tuple<double, core::FrameKey, std::size_t>;
    std::vector<Candidate> candidates;
    for (const auto& [key, frame] : pred.frames) {
      for (std::size_t i = 0; i < frame.size(); ++i) {
        if (frame[i].box.category == category) candidates.emplace_back(frame[i].box.score, key, i);
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    });

    double ap_sum = 0.0;
    for (double threshold : thresholds) {
      std::map<core::FrameKey, std::vector<bool>> used;
      std::vector<double> precision;
      std::vector<std::size_t> found;
      std::size_t hits = 0;
      for (std::size_t n = 0; n < candidates.size(); ++n) {
        const auto& [score, key, idx] = candidates[n];
        const auto& p = pred.frames.at(key)[idx].box;
        bool hit = false;
        auto frame_it = gt.frames.find(key);
        if (frame_it != gt.frames.end()) {
          const auto& frame = frame_it->second;
          auto& taken = used[key];
          taken.resize(frame.size(), false);
          std::size_t best = frame.size();
          double best_d = 0.0;
          for (std::size_t g = 0; g < frame.size(); ++g) {
            if (taken[g] || frame[g].box.category != category) continue;
            const double d = std::hypot(frame[g].box.center.x - p.center.x,
                                        frame[g].box.center.y - p.center.y);
            if (d < threshold && (best == frame.size() || d < best_d)) {
              best = g;
              best_d = d;
            }
          }
          if (best != frame.size()) {
            taken[best] = true;
            hit = true;
          }
        }
        if (hit) ++hits;
        precision.push_back(static_cast<double>(hits) / static_cast<double>(n + 1));
        found.push_back(hits);
      }
      // Interpolated precision at recall k / total, for k = 1..total.
      double ap = 0.0;
      for (std::size_t k = 1; k <= total; ++k) {
        double best = 0.0;
        for (std::size_t n = 0; n < precision.size(); ++n) {
          if (found[n] >= k) {
            best = std::max(best, precision[n]);
          }
        }
        ap += best;
      }
      ap_sum += ap / static_cast<double>(total);
    }
    result[category] = ap_sum / static_cast<double>(thresholds.size());
  }
  return result;
}

}  // namespace perceval::synth
