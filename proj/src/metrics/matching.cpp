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

#include "matching.hpp"

#include <algorithm>

#include "perceval/geometry/geometry.hpp"

namespace perceval::metrics::detail {

void rank_predictions(std::vector<RankedPred>& preds) {
  std::stable_sort(preds.begin(), preds.end(), [](const RankedPred& a, const RankedPred& b) {
    return a.entry->box.score > b.entry->box.score;
  });
}

std::vector<std::optional<std::size_t>> greedy_match(
    std::span<const std::vector<const core::Entry*>> gt_by_frame,
    std::span<const RankedPred> preds, double threshold) {
  std::vector<std::vector<char>> taken(gt_by_frame.size());
  for (std::size_t f = 0; f < gt_by_frame.size(); ++f) {
    taken[f].assign(gt_by_frame[f].size(), 0);
  }
  std::vector<std::optional<std::size_t>> out(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& gts = gt_by_frame[preds[i].frame];
    auto& used = taken[preds[i].frame];
    std::optional<std::size_t> best;
    double best_d = threshold;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double d = geometry::center_distance(gts[g]->box, preds[i].entry->box);
      if (d < threshold && (!best || d < best_d)) {
        best = g;
        best_d = d;
      }
    }
    if (best) {
      used[*best] = 1;
      out[i] = best;
    }
  }
  return out;
}

double average_precision(std::span<const char> tp, std::size_t num_gt) {
  if (num_gt == 0 || tp.empty()) return 0.0;
  std::vector<double> precision(tp.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (tp[i]) ++hits;
    precision[i] = static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  double envelope = 0.0;
  double ap = 0.0;
  for (std::size_t i = tp.size(); i-- > 0;) {
    envelope = std::max(envelope, precision[i]);
    if (tp[i]) ap += envelope;
  }
  return std::clamp(ap / static_cast<double>(num_gt), 0.0, 1.0);
}

Assignment gated_min_distance(const CostMatrix& distance, double gate) {
  const std::size_t n = distance.rows();
  const std::size_t m = distance.cols();
  if (n == 0 || m == 0) return {};
  // Any single out-of-gate pair costs more than every in-gate matching
  // combined, so cardinality of valid pairs dominates.
  const double big = gate * static_cast<double>(std::min(n, m) + 1) + 1.0;
  CostMatrix cost(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      cost(r, c) = distance(r, c) < gate ? distance(r, c) : big;
    }
  }
  Assignment out;
  for (const auto& [r, c] : hungarian(cost)) {
    if (distance(r, c) < gate) out.emplace_back(r, c);
  }
  return out;
}

Assignment max_similarity(const CostMatrix& similarity, double alpha) {
  const std::size_t n = similarity.rows();
  const std::size_t m = similarity.cols();
  if (n == 0 || m == 0) return {};
  CostMatrix cost(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      cost(r, c) = similarity(r, c) >= alpha ? -similarity(r, c) : 0.0;
    }
  }
  Assignment out;
  for (const auto& [r, c] : hungarian(cost)) {
    if (similarity(r, c) >= alpha) out.emplace_back(r, c);
  }
  return out;
}

}  // namespace perceval::metrics::detail
