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

#include "perceval/metrics/detection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "matching.hpp"
#include "perceval/geometry/geometry.hpp"

namespace perceval::metrics {

namespace {

using core::Entry;
using core::FrameKey;
using core::FrameSet;

struct CategoryData {
  std::vector<std::vector<const Entry*>> gt_by_frame;
  std::vector<detail::RankedPred> preds;
  std::size_t num_gt = 0;
};

}  // namespace

double aligned_size_similarity(const core::Vec3& a, const core::Vec3& b) {
  auto ratio = [](double p, double q) { return std::min(p, q) / std::max(p, q); };
  return std::cbrt(ratio(a.x, b.x) * ratio(a.y, b.y) * ratio(a.z, b.z));
}

DetectionMetrics detection_metrics(const FrameSet& gt, const FrameSet& pred,
                                   const MatchConfig& cfg) {
  validate(cfg);
  std::map<FrameKey, std::size_t> slot;
  for (const auto& [key, frame] : gt.frames) slot.emplace(key, 0);
  for (const auto& [key, frame] : pred.frames) slot.emplace(key, 0);
  std::size_t next = 0;
  for (auto& [key, s] : slot) s = next++;

  std::map<std::string, CategoryData> data;
  for (const auto& [key, frame] : gt.frames) {
    for (const auto& e : frame) {
      auto& d = data[e.box.category];
      if (d.gt_by_frame.empty()) d.gt_by_frame.resize(slot.size());
      d.gt_by_frame[slot.at(key)].push_back(&e);
      ++d.num_gt;
    }
  }

  DetectionMetrics out;
  std::set<std::string> unknown;
  for (const auto& [key, frame] : pred.frames) {
    for (const auto& e : frame) {
      auto it = data.find(e.box.category);
      if (it == data.end()) {
        unknown.insert(e.box.category);
        continue;
      }
      it->second.preds.push_back({slot.at(key), &e});
    }
  }
  for (const auto& c : unknown) {
    out.warnings.push_back("predictions of category '" + c +
                           "' have no ground truth and were ignored");
  }

  for (auto& [category, d] : data) {
    detail::rank_predictions(d.preds);
    DetectionCategoryMetrics m;
    m.num_gt = d.num_gt;
    m.num_pred = d.preds.size();

    for (double threshold : cfg.distance_thresholds) {
      const auto match = detail::greedy_match(d.gt_by_frame, d.preds, threshold);
      std::vector<char> tp(match.size());
      for (std::size_t i = 0; i < match.size(); ++i) tp[i] = match[i].has_value();
      m.ap_per_threshold.push_back(detail::average_precision(tp, d.num_gt));
    }
    double ap_sum = 0.0;
    for (double a : m.ap_per_threshold) ap_sum += a;
    m.ap = ap_sum / static_cast<double>(m.ap_per_threshold.size());

    const auto match = detail::greedy_match(d.gt_by_frame, d.preds, cfg.tp_error_threshold);
    double te = 0.0, se = 0.0, oe = 0.0;
    for (std::size_t i = 0; i < match.size(); ++i) {
      if (!match[i]) continue;
      const auto& p = d.preds[i].entry->box;
      const auto& g = d.gt_by_frame[d.preds[i].frame][*match[i]]->box;
      te += geometry::center_distance(p, g);
      se += 1.0 - aligned_size_similarity(p.size, g.size);
      oe += geometry::yaw_error(p.yaw, g.yaw);
      ++m.num_tp;
    }
    if (m.num_tp > 0) {
      const double n = static_cast<double>(m.num_tp);
      m.ate = te / n;
      m.ase = se / n;
      m.aoe = oe / n;
    } else {
      m.ate = cfg.cds_ate_norm;
      m.ase = cfg.cds_ase_norm;
      m.aoe = cfg.cds_aoe_norm;
    }
    const double quality = ((1.0 - std::min(1.0, m.ate / cfg.cds_ate_norm)) +
                            (1.0 - std::min(1.0, m.ase / cfg.cds_ase_norm)) +
                            (1.0 - std::min(1.0, m.aoe / cfg.cds_aoe_norm))) /
                           3.0;
    m.cds = m.ap * quality;
    out.per_category.emplace(category, std::move(m));
  }

  if (!out.per_category.empty()) {
    for (const auto& [category, m] : out.per_category) {
      out.mean_ap += m.ap;
      out.mean_ate += m.ate;
      out.mean_ase += m.ase;
      out.mean_aoe += m.aoe;
      out.mean_cds += m.cds;
    }
    const double n = static_cast<double>(out.per_category.size());
    out.mean_ap /= n;
    out.mean_ate /= n;
    out.mean_ase /= n;
    out.mean_aoe /= n;
    out.mean_cds /= n;
  } else {
    out.warnings.push_back("ground truth contains no boxes");
  }
  return out;
}

}  // namespace perceval::metrics
