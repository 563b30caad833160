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

#include "perceval/ensemble/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "perceval/core/error.hpp"
#include "perceval/core/parallel.hpp"
#include "perceval/geometry/geometry.hpp"
#include "perceval/geometry/nms.hpp"

namespace perceval::ensemble {

namespace {

using core::Box3D;
using core::Entry;
using core::FrameKey;
using core::FrameSet;
using core::Kind;
using core::Trajectory;
using core::ValidationError;
using core::Vec2;

// Every frame set must carry exactly the keys of the first; the error lists
// what is missing where.
std::vector<FrameKey> common_keys(std::span<const FrameSet* const> sets,
                                  std::span<const std::string> names) {
  std::vector<FrameKey> keys;
  for (const auto& [key, frame] : sets.front()->frames) keys.push_back(key);
  std::ostringstream problems;
  bool bad = false;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    for (const auto& key : keys) {
      if (!sets[i]->frames.contains(key)) {
        problems << "\n  " << names[i] << " is missing " << core::to_string(key);
        bad = true;
      }
    }
    for (const auto& [key, frame] : sets[i]->frames) {
      if (!sets.front()->frames.contains(key)) {
        problems << "\n  " << names.front() << " is missing "
                 << core::to_string(key);
        bad = true;
      }
    }
  }
  if (bad) throw ValidationError("mismatched frame keys:" + problems.str());
  return keys;
}

struct Member {
  const Entry* entry;
  double model_weight;
  std::size_t model_index;
};

struct Cluster {
  std::vector<Member> members;
  Box3D fused;
};

// Score-times-weight averaging of all members. Single-member clusters return
// the member box untouched.
Box3D fuse_geometry(const std::vector<Member>& members) {
  if (members.size() == 1) return members.front().entry->box;
  std::vector<double> w(members.size());
  double total = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    w[i] = members[i].entry->box.score * members[i].model_weight;
    total += w[i];
  }
  if (!(total > 0.0)) {
    for (std::size_t i = 0; i < members.size(); ++i) w[i] = members[i].model_weight;
    total = std::accumulate(w.begin(), w.end(), 0.0);
  }
  Box3D out = members.front().entry->box;
  core::Vec3 c{}, s{};
  Vec2 v{};
  double sin_sum = 0.0, cos_sum = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Box3D& b = members[i].entry->box;
    const double k = w[i] / total;
    c = {c.x + k * b.center.x, c.y + k * b.center.y, c.z + k * b.center.z};
    s = {s.x + k * b.size.x, s.y + k * b.size.y, s.z + k * b.size.z};
    v = {v.x + k * b.velocity.x, v.y + k * b.velocity.y};
    sin_sum += w[i] * std::sin(b.yaw);
    cos_sum += w[i] * std::cos(b.yaw);
  }
  out.center = c;
  out.size = s;
  out.velocity = v;
  out.yaw = core::normalize_yaw(std::atan2(sin_sum, cos_sum));
  return out;
}

double fuse_score(const std::vector<Member>& members, ScoreFusion mode,
                  std::size_t num_models) {
  double fused = 0.0;
  switch (mode) {
    case ScoreFusion::kMean: {
      for (const auto& m : members) fused += m.entry->box.score;
      fused /= static_cast<double>(members.size());
      break;
    }
    case ScoreFusion::kWeightedMean: {
      double wsum = 0.0;
      for (const auto& m : members) {
        fused += m.model_weight * m.entry->box.score;
        wsum += m.model_weight;
      }
      fused /= wsum;
      break;
    }
    case ScoreFusion::kMax: {
      for (const auto& m : members) fused = std::max(fused, m.entry->box.score);
      break;
    }
  }
  const double agreement = std::min(
      1.0, static_cast<double>(members.size()) / static_cast<double>(num_models));
  return std::clamp(fused * agreement, 0.0, 1.0);
}

// Greedy first-fit clustering of one frame across models, per category, in
// descending score order. Clusters come back grouped by category in order of
// first appearance.
std::vector<Cluster> cluster_detections(std::span<const ModelOutput> models,
                                        const FrameKey& key,
                                        const EnsembleConfig& cfg) {
  std::vector<Member> pool;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto& frame = models[m].frames.frames.at(key);
    for (const auto& e : frame) pool.push_back({&e, models[m].weight, m});
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Member& a, const Member& b) {
    return a.entry->box.score > b.entry->box.score;
  });

  std::vector<std::string> category_order;
  std::map<std::string, std::vector<Cluster>> by_category;
  for (const Member& member : pool) {
    const Box3D& box = member.entry->box;
    auto [it, inserted] = by_category.try_emplace(box.category);
    if (inserted) category_order.push_back(box.category);
    auto& clusters = it->second;
    auto hit = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
      return geometry::bev_iou(c.fused, box) > cfg.iou_cluster_threshold;
    });
    if (hit == clusters.end()) {
      clusters.push_back({{member}, box});
    } else {
      hit->members.push_back(member);
      hit->fused = fuse_geometry(hit->members);
    }
  }

  std::vector<Cluster> out;
  for (const auto& cat : category_order) {
    for (auto& c : by_category[cat]) out.push_back(std::move(c));
  }
  return out;
}

void sort_by_score(core::Frame& frame) {
  std::stable_sort(frame.begin(), frame.end(), [](const Entry& a, const Entry& b) {
    return a.box.score > b.box.score;
  });
}

struct PooledTrajectory {
  const core::Mode* mode;
  std::size_t member;
  double weight;
};

struct TrajectoryCluster {
  std::vector<std::size_t> items;
  std::set<std::size_t> members;
  Trajectory fused;
  double score_sum = 0.0;
};

Trajectory fuse_trajectories(const std::vector<PooledTrajectory>& pool,
                             const std::vector<std::size_t>& items) {
  if (items.size() == 1) return pool[items.front()].mode->trajectory;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i : items) {
    w.push_back(pool[i].weight);
    total += pool[i].weight;
  }
  if (!(total > 0.0)) {
    std::fill(w.begin(), w.end(), 1.0);
    total = static_cast<double>(w.size());
  }
  Trajectory out = pool[items.front()].mode->trajectory;
  for (auto& p : out.waypoints) p = {0.0, 0.0};
  for (std::size_t j = 0; j < items.size(); ++j) {
    const auto& wp = pool[items[j]].mode->trajectory.waypoints;
    const double k = w[j] / total;
    for (std::size_t n = 0; n < out.waypoints.size(); ++n) {
      out.waypoints[n] = out.waypoints[n] + k * wp[n];
    }
  }
  return out;
}

std::vector<core::Mode> fuse_modes(const Cluster& cluster, const Box3D& fused_box,
                                   const EnsembleConfig& cfg) {
  std::vector<PooledTrajectory> pool;
  std::size_t max_k = 0;
  for (std::size_t m = 0; m < cluster.members.size(); ++m) {
    const Member& mem = cluster.members[m];
    max_k = std::max(max_k, mem.entry->modes.size());
    for (const auto& mode : mem.entry->modes) {
      pool.push_back({&mode, m, mode.score * mem.entry->box.score * mem.model_weight});
    }
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pool[a].weight > pool[b].weight;
  });

  const double tau = speed_adaptive_threshold(core::norm(fused_box.velocity), cfg);
  std::vector<TrajectoryCluster> clusters;
  for (std::size_t idx : order) {
    const auto& item = pool[idx];
    auto hit = std::find_if(clusters.begin(), clusters.end(), [&](const TrajectoryCluster& c) {
      return !c.members.contains(item.member) &&
             mean_l2_distance(c.fused, item.mode->trajectory) <= tau;
    });
    if (hit == clusters.end()) {
      clusters.push_back({{idx}, {item.member}, item.mode->trajectory, item.mode->score});
    } else {
      hit->items.push_back(idx);
      hit->members.insert(item.member);
      hit->score_sum += item.mode->score;
      hit->fused = fuse_trajectories(pool, hit->items);
    }
  }

  double total = 0.0;
  for (const auto& c : clusters) total += c.score_sum;
  std::vector<core::Mode> modes;
  for (const auto& c : clusters) {
    const double score = total > 0.0 ? c.score_sum / total
                                     : 1.0 / static_cast<double>(clusters.size());
    modes.push_back({c.fused, std::clamp(score, 0.0, 1.0)});
  }
  std::stable_sort(modes.begin(), modes.end(), [](const core::Mode& a, const core::Mode& b) {
    return a.score > b.score;
  });
  if (modes.size() > max_k) modes.resize(max_k);
  return modes;
}

std::vector<const FrameSet*> frame_sets(std::span<const ModelOutput> models) {
  std::vector<const FrameSet*> sets;
  for (const auto& m : models) sets.push_back(&m.frames);
  return sets;
}

std::vector<std::string> model_names(std::span<const ModelOutput> models) {
  std::vector<std::string> names;
  for (const auto& m : models) names.push_back(m.model_id);
  return names;
}

void check_models(std::span<const ModelOutput> models) {
  if (models.empty()) throw ValidationError("ensemble: no models given");
  for (const auto& m : models) {
    if (!(m.weight > 0.0)) {
      throw ValidationError("ensemble: model '" + m.model_id +
                            "' has non-positive weight");
    }
  }
}

// Shared driver: cluster each frame, then hand every surviving cluster to
// `emit` to build its output entry.
template <typename Emit>
FrameSet fuse_frames(std::span<const ModelOutput> models, const EnsembleConfig& cfg,
                     Kind out_kind, int threads, Emit&& emit) {
  validate(cfg);
  check_models(models);
  const auto sets = frame_sets(models);
  const auto names = model_names(models);
  const auto keys = common_keys(sets, names);

  std::vector<core::Frame> fused(keys.size());
  core::parallel_for(keys.size(), threads, [&](std::size_t i) {
    const auto clusters = cluster_detections(models, keys[i], cfg);
    core::Frame frame;
    for (const auto& c : clusters) {
      if (static_cast<int>(c.members.size()) < cfg.min_cluster_votes) continue;
      Entry e;
      e.box = c.fused;
      e.box.score = fuse_score(c.members, cfg.score_fusion, models.size());
      emit(c, e);
      frame.push_back(std::move(e));
    }
    sort_by_score(frame);
    fused[i] = std::move(frame);
  });

  FrameSet out;
  out.kind = out_kind;
  for (std::size_t i = 0; i < keys.size(); ++i) out.frames.emplace(keys[i], std::move(fused[i]));
  return out;
}

}  // namespace

void validate(const EnsembleConfig& cfg) {
  if (!(cfg.iou_cluster_threshold > 0.0 && cfg.iou_cluster_threshold <= 1.0)) {
    throw ValidationError("iou_cluster_threshold must lie in (0, 1]");
  }
  if (!(cfg.traj_base_threshold > 0.0)) {
    throw ValidationError("traj_base_threshold must be positive");
  }
  if (!(cfg.traj_speed_coeff >= 0.0)) {
    throw ValidationError("traj_speed_coeff must be non-negative");
  }
  if (cfg.min_cluster_votes < 1) {
    throw ValidationError("min_cluster_votes must be at least 1");
  }
}

double speed_adaptive_threshold(double speed, const EnsembleConfig& cfg) {
  return cfg.traj_base_threshold + cfg.traj_speed_coeff * speed;
}

double mean_l2_distance(const Trajectory& a, const Trajectory& b) {
  if (a.horizon() != b.horizon()) {
    throw ValidationError("trajectory horizons differ");
  }
  if (a.waypoints.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
    acc += core::norm(a.waypoints[i] - b.waypoints[i]);
  }
  return acc / static_cast<double>(a.waypoints.size());
}

FrameSet tta_merge(
    std::span<const std::pair<geometry::TtaTransform, FrameSet>> outputs,
    double iou_threshold, int threads) {
  if (outputs.empty()) throw ValidationError("tta_merge: no inputs");
  const Kind kind = outputs.front().second.kind;
  if (kind == Kind::kTrack) {
    throw ValidationError("tta_merge: track inputs are not supported");
  }
  std::vector<const FrameSet*> sets;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].second.kind != kind) {
      throw ValidationError("tta_merge: inputs disagree on kind");
    }
    sets.push_back(&outputs[i].second);
    names.push_back("input " + std::to_string(i));
  }
  const auto keys = common_keys(sets, names);

  std::vector<core::Frame> merged(keys.size());
  core::parallel_for(keys.size(), threads, [&](std::size_t i) {
    core::Frame pooled;
    for (const auto& [t, fs] : outputs) {
      for (const auto& e : fs.frames.at(keys[i])) pooled.push_back(geometry::invert_tta(e, t));
    }
    const auto boxes = core::boxes_of(pooled);
    core::Frame kept;
    for (std::size_t k : geometry::nms_indices(boxes, iou_threshold)) {
      kept.push_back(std::move(pooled[k]));
    }
    merged[i] = std::move(kept);
  });

  FrameSet out;
  out.kind = kind;
  for (std::size_t i = 0; i < keys.size(); ++i) out.frames.emplace(keys[i], std::move(merged[i]));
  return out;
}

FrameSet wbf(std::span<const ModelOutput> models, const EnsembleConfig& cfg,
             int threads) {
  return fuse_frames(models, cfg, Kind::kDetection, threads,
                     [](const Cluster&, Entry&) {});
}

FrameSet ensemble_forecasts(std::span<const ModelOutput> models,
                            const EnsembleConfig& cfg, int threads) {
  check_models(models);
  std::optional<std::size_t> horizon;
  for (const auto& m : models) {
    if (m.frames.kind != Kind::kForecast) {
      throw ValidationError("ensemble_forecasts: model '" + m.model_id +
                            "' does not carry forecasts");
    }
    for (const auto& [key, frame] : m.frames.frames) {
      for (const auto& e : frame) {
        for (const auto& mode : e.modes) {
          if (!horizon) horizon = mode.trajectory.horizon();
          if (mode.trajectory.horizon() != *horizon) {
            throw ValidationError("ensemble_forecasts: inconsistent horizons (" +
                                  std::to_string(*horizon) + " vs " +
                                  std::to_string(mode.trajectory.horizon()) +
                                  ") in model '" + m.model_id + "'");
          }
        }
      }
    }
  }
  return fuse_frames(models, cfg, Kind::kForecast, threads,
                     [&](const Cluster& c, Entry& e) { e.modes = fuse_modes(c, c.fused, cfg); });
}

}  // namespace perceval::ensemble
