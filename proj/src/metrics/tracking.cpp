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

#include "perceval/metrics/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "matching.hpp"
#include "perceval/core/error.hpp"
#include "perceval/core/parallel.hpp"
#include "perceval/geometry/geometry.hpp"

namespace perceval::metrics {

namespace {

using core::Entry;
using core::FrameKey;
using core::FrameSet;

struct TrackFrame {
  std::vector<const Entry*> gt;
  std::vector<const Entry*> pred;
};

// One category's view of the data: logs in log_id order, frames in time order.
using CategoryLogs = std::vector<std::vector<TrackFrame>>;

std::map<std::string, CategoryLogs> group_by_category(const FrameSet& gt,
                                                      const FrameSet& pred) {
  std::set<std::string> categories;
  for (const auto& [key, frame] : gt.frames) {
    for (const auto& e : frame) categories.insert(e.box.category);
  }
  std::map<FrameKey, std::pair<const core::Frame*, const core::Frame*>> keys;
  for (const auto& [key, frame] : gt.frames) keys[key].first = &frame;
  for (const auto& [key, frame] : pred.frames) keys[key].second = &frame;

  std::map<std::string, CategoryLogs> out;
  for (const auto& c : categories) out[c];
  const std::string* current_log = nullptr;
  for (const auto& [key, frames] : keys) {
    const bool new_log = current_log == nullptr || *current_log != key.log_id;
    current_log = &key.log_id;
    for (auto& [category, logs] : out) {
      if (new_log) logs.emplace_back();
      TrackFrame tf;
      if (frames.first) {
        for (const auto& e : *frames.first) {
          if (e.box.category == category) tf.gt.push_back(&e);
        }
      }
      if (frames.second) {
        for (const auto& e : *frames.second) {
          if (e.box.category == category) tf.pred.push_back(&e);
        }
      }
      logs.back().push_back(std::move(tf));
    }
  }
  return out;
}

std::uint64_t id_of(const Entry* e) { return e->track_id.value_or(0); }

ClearCounts clear_counts(const CategoryLogs& logs, double gate, double min_score) {
  ClearCounts c;
  for (const auto& log : logs) {
    std::unordered_map<std::uint64_t, std::uint64_t> last_match;
    for (const auto& frame : log) {
      std::vector<const Entry*> preds;
      for (const Entry* p : frame.pred) {
        if (p->box.score >= min_score) preds.push_back(p);
      }
      CostMatrix dist(frame.gt.size(), preds.size());
      for (std::size_t g = 0; g < frame.gt.size(); ++g) {
        for (std::size_t p = 0; p < preds.size(); ++p) {
          dist(g, p) = geometry::center_distance(frame.gt[g]->box, preds[p]->box);
        }
      }
      const auto matches = detail::gated_min_distance(dist, gate);
      for (const auto& [g, p] : matches) {
        const std::uint64_t gid = id_of(frame.gt[g]);
        const std::uint64_t pid = id_of(preds[p]);
        auto it = last_match.find(gid);
        if (it != last_match.end() && it->second != pid) ++c.idsw;
        last_match[gid] = pid;
      }
      c.num_gt += frame.gt.size();
      c.tp += matches.size();
      c.fp += preds.size() - matches.size();
      c.fn += frame.gt.size() - matches.size();
    }
  }
  return c;
}

double amota_for(const CategoryLogs& logs, const MatchConfig& cfg) {
  std::vector<double> scores;
  for (const auto& log : logs) {
    for (const auto& frame : log) {
      for (const Entry* p : frame.pred) scores.push_back(p->box.score);
    }
  }
  if (scores.empty()) return 0.0;
  std::sort(scores.begin(), scores.end(), std::greater<>());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());

  std::map<std::size_t, ClearCounts> memo;
  auto at = [&](std::size_t k) -> const ClearCounts& {
    auto it = memo.find(k);
    if (it == memo.end()) {
      it = memo.emplace(k, clear_counts(logs, cfg.tp_error_threshold, scores[k])).first;
    }
    return it->second;
  };

  const auto n = static_cast<std::size_t>(cfg.amota_recall_samples);
  const ClearCounts& loosest = at(scores.size() - 1);
  const std::size_t gt = loosest.num_gt;
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    // recall >= j / n, compared in integers.
    auto reaches = [&](const ClearCounts& c) { return c.tp * n >= j * gt; };
    if (!reaches(loosest)) continue;
    std::size_t lo = 0, hi = scores.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (reaches(at(mid))) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const ClearCounts& c = at(lo);
    const double r = static_cast<double>(j) / static_cast<double>(n);
    const double g = static_cast<double>(gt);
    const double errors = static_cast<double>(c.idsw + c.fp + c.fn) - (1.0 - r) * g;
    total += std::clamp(1.0 - errors / (r * g), 0.0, 1.0);
  }
  return total / static_cast<double>(n);
}

HotaScore hota_for(const CategoryLogs& logs, const MatchConfig& cfg) {
  // Similarity matrices are alpha-independent; build them once.
  struct FrameSim {
    std::size_t log;
    const TrackFrame* frame;
    CostMatrix sim;
  };
  std::vector<FrameSim> sims;
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> gt_count, pred_count;
  std::size_t total_gt = 0, total_pred = 0;
  for (std::size_t l = 0; l < logs.size(); ++l) {
    for (const auto& frame : logs[l]) {
      CostMatrix sim(frame.gt.size(), frame.pred.size());
      for (std::size_t g = 0; g < frame.gt.size(); ++g) {
        for (std::size_t p = 0; p < frame.pred.size(); ++p) {
          const auto& gb = frame.gt[g]->box;
          const auto& pb = frame.pred[p]->box;
          sim(g, p) = cfg.hota_similarity == HotaSimilarity::kBevIou
                          ? geometry::bev_iou(gb, pb)
                          : std::max(0.0, 1.0 - geometry::center_distance(gb, pb) /
                                                     cfg.tp_error_threshold);
        }
      }
      for (const Entry* g : frame.gt) ++gt_count[{l, id_of(g)}];
      for (const Entry* p : frame.pred) ++pred_count[{l, id_of(p)}];
      total_gt += frame.gt.size();
      total_pred += frame.pred.size();
      sims.push_back({l, &frame, std::move(sim)});
    }
  }

  HotaScore out;
  for (double alpha : cfg.hota_alphas) {
    std::map<std::tuple<std::size_t, std::uint64_t, std::uint64_t>, std::size_t> pairs;
    std::size_t tp = 0;
    for (const auto& fs : sims) {
      for (const auto& [g, p] : detail::max_similarity(fs.sim, alpha)) {
        ++pairs[{fs.log, id_of(fs.frame->gt[g]), id_of(fs.frame->pred[p])}];
        ++tp;
      }
    }
    HotaAtAlpha h;
    h.alpha = alpha;
    const std::size_t fn = total_gt - tp;
    const std::size_t fp = total_pred - tp;
    if (tp > 0) {
      h.deta = static_cast<double>(tp) / static_cast<double>(tp + fn + fp);
      double acc = 0.0;
      for (const auto& [key, tpa] : pairs) {
        const auto& [log, gid, pid] = key;
        const std::size_t fna = gt_count.at({log, gid}) - tpa;
        const std::size_t fpa = pred_count.at({log, pid}) - tpa;
        acc += static_cast<double>(tpa) * static_cast<double>(tpa) /
               static_cast<double>(tpa + fna + fpa);
      }
      h.assa = acc / static_cast<double>(tp);
      h.hota = std::sqrt(h.deta * h.assa);
    }
    out.per_alpha.push_back(h);
  }
  const double n = static_cast<double>(out.per_alpha.size());
  for (const auto& h : out.per_alpha) {
    out.hota += h.hota;
    out.deta += h.deta;
    out.assa += h.assa;
  }
  out.hota /= n;
  out.deta /= n;
  out.assa /= n;
  return out;
}

}  // namespace

double ClearCounts::mota() const {
  return 1.0 - static_cast<double>(fn + fp + idsw) / static_cast<double>(num_gt);
}

TrackingMetrics tracking_metrics(const FrameSet& gt, const FrameSet& pred,
                                 const MatchConfig& cfg, int threads) {
  validate(cfg);
  if (gt.num_entries() == 0) {
    throw core::ValidationError("tracking metrics are undefined without ground truth");
  }
  const auto grouped = group_by_category(gt, pred);

  TrackingMetrics out;
  std::set<std::string> unknown;
  for (const auto& [key, frame] : pred.frames) {
    for (const auto& e : frame) {
      if (!grouped.contains(e.box.category)) unknown.insert(e.box.category);
    }
  }
  for (const auto& c : unknown) {
    out.warnings.push_back("predictions of category '" + c +
                           "' have no ground truth and were ignored");
  }

  std::vector<const std::pair<const std::string, CategoryLogs>*> items;
  for (const auto& kv : grouped) items.push_back(&kv);
  std::vector<TrackingCategoryMetrics> results(items.size());
  core::parallel_for(items.size(), threads, [&](std::size_t i) {
    const CategoryLogs& logs = items[i]->second;
    TrackingCategoryMetrics m;
    m.clear = clear_counts(logs, cfg.tp_error_threshold,
                           -std::numeric_limits<double>::infinity());
    m.mota = m.clear.mota();
    m.amota = amota_for(logs, cfg);
    m.hota = hota_for(logs, cfg);
    results[i] = std::move(m);
  });

  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& m = results[i];
    out.mean_hota += m.hota.hota;
    out.mean_deta += m.hota.deta;
    out.mean_assa += m.hota.assa;
    out.mean_mota += m.mota;
    out.mean_amota += m.amota;
    out.per_category.emplace(items[i]->first, m);
  }
  const double n = static_cast<double>(items.size());
  out.mean_hota /= n;
  out.mean_deta /= n;
  out.mean_assa /= n;
  out.mean_mota /= n;
  out.mean_amota /= n;
  return out;
}

double mota(const FrameSet& gt, const FrameSet& pred, const MatchConfig& cfg) {
  return tracking_metrics(gt, pred, cfg).mean_mota;
}

HotaScore hota(const FrameSet& gt, const FrameSet& pred, const MatchConfig& cfg) {
  const auto m = tracking_metrics(gt, pred, cfg);
  if (m.per_category.size() == 1) return m.per_category.begin()->second.hota;
  HotaScore s;
  s.hota = m.mean_hota;
  s.deta = m.mean_deta;
  s.assa = m.mean_assa;
  return s;
}

double amota(const FrameSet& gt, const FrameSet& pred, const MatchConfig& cfg) {
  return tracking_metrics(gt, pred, cfg).mean_amota;
}

}  // namespace perceval::metrics
