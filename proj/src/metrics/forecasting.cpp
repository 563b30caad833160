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

#include "perceval/metrics/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "matching.hpp"
#include "perceval/core/error.hpp"

namespace perceval::metrics {

namespace {

using core::Entry;
using core::FrameKey;
using core::FrameSet;
using core::Trajectory;
using core::Vec2;

const Trajectory& realized_future(const Entry& gt) { return gt.modes.front().trajectory; }

const core::Mode& top_mode(const Entry& e) {
  return *std::max_element(e.modes.begin(), e.modes.end(),
                           [](const core::Mode& a, const core::Mode& b) {
                             return a.score < b.score;
                           });
}

double fde(const Trajectory& t, const Trajectory& gt) {
  return core::norm(t.waypoints.back() - gt.waypoints.back());
}

double ade(const Trajectory& t, const Trajectory& gt) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.waypoints.size(); ++i) {
    acc += core::norm(t.waypoints[i] - gt.waypoints[i]);
  }
  return acc / static_cast<double>(t.waypoints.size());
}

// Minimum-FDE mode; ties to the lowest index.
const Trajectory& best_mode(const Entry& pred, const Trajectory& gt) {
  const Trajectory* best = &pred.modes.front().trajectory;
  double best_fde = fde(*best, gt);
  for (const auto& m : pred.modes) {
    const double d = fde(m.trajectory, gt);
    if (d < best_fde) {
      best = &m.trajectory;
      best_fde = d;
    }
  }
  return *best;
}

struct CategoryData {
  std::vector<std::vector<const Entry*>> gt_by_frame;
  // Cohort of each ground truth, parallel to gt_by_frame.
  std::vector<std::vector<Cohort>> gt_cohort;
  std::vector<detail::RankedPred> preds;
  std::vector<Cohort> pred_own_cohort;
  std::array<std::size_t, 3> num_gt{};
};

void check_horizons(const FrameSet& fs, const char* what,
                    std::optional<std::size_t>& horizon) {
  for (const auto& [key, frame] : fs.frames) {
    for (const auto& e : frame) {
      if (e.modes.empty()) {
        throw core::ValidationError(std::string(what) + " entry without modes at " +
                                    core::to_string(key));
      }
      for (const auto& m : e.modes) {
        if (!horizon) horizon = m.trajectory.horizon();
        if (m.trajectory.horizon() != *horizon || *horizon == 0) {
          throw core::ValidationError(
              "forecast horizon mismatch: expected " + std::to_string(*horizon) +
              " steps, " + what + " at " + core::to_string(key) + " has " +
              std::to_string(m.trajectory.horizon()));
        }
      }
    }
  }
}

}  // namespace

std::string_view cohort_name(Cohort c) {
  switch (c) {
    case Cohort::kStatic:
      return "static";
    case Cohort::kLinear:
      return "linear";
    case Cohort::kNonlinear:
      return "nonlinear";
  }
  return "static";
}

Cohort classify_cohort(Vec2 start, const Trajectory& future, const MatchConfig& cfg) {
  const auto& w = future.waypoints;
  if (w.empty()) return Cohort::kStatic;
  double path = 0.0;
  Vec2 prev = start;
  for (const auto& p : w) {
    path += core::norm(p - prev);
    prev = p;
  }
  const double speed = path / (static_cast<double>(w.size()) * future.step_period);
  if (speed < cfg.static_speed_threshold) return Cohort::kStatic;

  const Vec2 step = w.front() - start;
  double deviation = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Vec2 extrapolated = start + static_cast<double>(k + 1) * step;
    deviation = std::max(deviation, core::norm(w[k] - extrapolated));
  }
  return deviation < cfg.linear_deviation_threshold ? Cohort::kLinear : Cohort::kNonlinear;
}

ForecastingMetrics forecasting_metrics(const FrameSet& gt, const FrameSet& pred,
                                       const MatchConfig& cfg) {
  validate(cfg);
  std::optional<std::size_t> horizon;
  check_horizons(gt, "ground truth", horizon);
  check_horizons(pred, "prediction", horizon);

  std::map<FrameKey, std::size_t> slot;
  for (const auto& [key, frame] : gt.frames) slot.emplace(key, 0);
  for (const auto& [key, frame] : pred.frames) slot.emplace(key, 0);
  std::size_t next = 0;
  for (auto& [key, s] : slot) s = next++;

  std::map<std::string, CategoryData> data;
  for (const auto& [key, frame] : gt.frames) {
    for (const auto& e : frame) {
      auto& d = data[e.box.category];
      if (d.gt_by_frame.empty()) {
        d.gt_by_frame.resize(slot.size());
        d.gt_cohort.resize(slot.size());
      }
      const Cohort c = classify_cohort(e.box.bev_center(), realized_future(e), cfg);
      d.gt_by_frame[slot.at(key)].push_back(&e);
      d.gt_cohort[slot.at(key)].push_back(c);
      ++d.num_gt[static_cast<std::size_t>(c)];
    }
  }

  ForecastingMetrics out;
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
    for (const auto& p : d.preds) {
      d.pred_own_cohort.push_back(
          classify_cohort(p.entry->box.bev_center(), top_mode(*p.entry).trajectory, cfg));
    }
    std::map<Cohort, ForecastCell> cells;
    for (Cohort c : kAllCohorts) cells[c].num_gt = d.num_gt[static_cast<std::size_t>(c)];

    auto cohort_of = [&](std::size_t i, const std::optional<std::size_t>& m) {
      return m ? d.gt_cohort[d.preds[i].frame][*m] : d.pred_own_cohort[i];
    };

    for (double threshold : cfg.distance_thresholds) {
      const auto match = detail::greedy_match(d.gt_by_frame, d.preds, threshold);
      std::array<std::vector<char>, 3> tp;
      for (std::size_t i = 0; i < match.size(); ++i) {
        bool hit = false;
        if (match[i]) {
          const Entry& g = *d.gt_by_frame[d.preds[i].frame][*match[i]];
          const Trajectory& truth = realized_future(g);
          hit = fde(best_mode(*d.preds[i].entry, truth), truth) < threshold;
        }
        tp[static_cast<std::size_t>(cohort_of(i, match[i]))].push_back(hit ? 1 : 0);
      }
      for (Cohort c : kAllCohorts) {
        auto& cell = cells[c];
        cell.ap_per_threshold.push_back(
            detail::average_precision(tp[static_cast<std::size_t>(c)], cell.num_gt));
      }
    }

    const auto match = detail::greedy_match(d.gt_by_frame, d.preds, cfg.tp_error_threshold);
    std::array<double, 3> ade_sum{}, fde_sum{};
    for (std::size_t i = 0; i < match.size(); ++i) {
      const Cohort c = cohort_of(i, match[i]);
      auto& cell = cells[c];
      ++cell.num_pred;
      if (!match[i]) continue;
      const Entry& g = *d.gt_by_frame[d.preds[i].frame][*match[i]];
      const Trajectory& truth = realized_future(g);
      const Trajectory& best = best_mode(*d.preds[i].entry, truth);
      ade_sum[static_cast<std::size_t>(c)] += ade(best, truth);
      fde_sum[static_cast<std::size_t>(c)] += fde(best, truth);
      ++cell.num_matched;
    }

    for (Cohort c : kAllCohorts) {
      auto& cell = cells[c];
      double s = 0.0;
      for (double a : cell.ap_per_threshold) s += a;
      cell.map_f = s / static_cast<double>(cell.ap_per_threshold.size());
      if (cell.num_matched > 0) {
        const double n = static_cast<double>(cell.num_matched);
        cell.ade = ade_sum[static_cast<std::size_t>(c)] / n;
        cell.fde = fde_sum[static_cast<std::size_t>(c)] / n;
      }
      if (cell.num_gt > 0 || cell.num_pred > 0) out.cells[category][c] = cell;
    }
  }

  std::size_t with_gt = 0, with_match = 0;
  double ade_total = 0.0, fde_total = 0.0;
  for (const auto& [category, by_cohort] : out.cells) {
    for (const auto& [c, cell] : by_cohort) {
      if (cell.num_gt == 0) continue;
      out.mean_map_f += cell.map_f;
      ++with_gt;
      if (cell.ade) {
        ade_total += *cell.ade;
        fde_total += *cell.fde;
        ++with_match;
      }
    }
  }
  if (with_gt > 0) {
    out.mean_map_f /= static_cast<double>(with_gt);
  } else {
    out.warnings.push_back("ground truth contains no agents");
  }
  if (with_match > 0) {
    out.mean_ade = ade_total / static_cast<double>(with_match);
    out.mean_fde = fde_total / static_cast<double>(with_match);
  }
  return out;
}

}  // namespace perceval::metrics
