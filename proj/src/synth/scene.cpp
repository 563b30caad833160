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

#include "perceval/synth/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "perceval/core/category.hpp"
#include "perceval/core/error.hpp"
#include "perceval/core/parallel.hpp"
#include "perceval/core/random.hpp"

namespace perceval::synth {

namespace {

using core::Box3D;
using core::Entry;
using core::FrameKey;
using core::FrameSet;
using core::Kind;
using core::Rng;
using core::ValidationError;
using core::Vec2;
using core::Vec3;

constexpr double kPi = std::numbers::pi;
constexpr double kLaneSpacing = 16.0;
constexpr std::uint64_t kLogStartNs = 1'600'000'000'000'000'000ULL;
constexpr std::uint64_t kFalsePositiveIdBase = 1'000'000;

enum class Motion { kStatic, kLinear, kTurning };

struct Profile {
  Vec3 size;
  double min_speed;
  double max_speed;
};

Profile profile_of(const std::string& category) {
  if (category == "PEDESTRIAN" || category == "WHEELCHAIR" || category == "STROLLER" ||
      category == "OFFICIAL_SIGNALER") {
    return {{0.7, 0.7, 1.75}, 0.8, 1.8};
  }
  if (category == "BICYCLIST" || category == "BICYCLE" || category == "MOTORCYCLIST" ||
      category == "MOTORCYCLE" || category == "WHEELED_RIDER") {
    return {{1.8, 0.7, 1.7}, 2.0, 6.0};
  }
  if (category == "BUS" || category == "TRUCK" || category == "ARTICULATED_BUS" ||
      category == "SCHOOL_BUS" || category == "TRUCK_CAB" || category == "BOX_TRUCK" ||
      category == "VEHICULAR_TRAILER") {
    return {{10.0, 2.6, 3.2}, 3.0, 10.0};
  }
  if (category == "REGULAR_VEHICLE" || category == "LARGE_VEHICLE") {
    return {{4.5, 1.9, 1.6}, 4.0, 12.0};
  }
  return {{1.0, 1.0, 1.5}, 1.0, 4.0};
}

struct Agent {
  std::uint64_t id = 0;
  std::string category;
  Motion motion = Motion::kStatic;
  Vec3 size;
  Vec2 origin;
  double yaw0 = 0.0;
  double speed = 0.0;
  double omega = 0.0;
};

struct Pose {
  Vec2 position;
  double yaw = 0.0;
  Vec2 velocity;
};

Pose pose_at(const Agent& a, double t) {
  switch (a.motion) {
    case Motion::kStatic:
      return {a.origin, a.yaw0, {0.0, 0.0}};
    case Motion::kLinear: {
      const Vec2 dir{std::cos(a.yaw0), std::sin(a.yaw0)};
      return {a.origin + (a.speed * t) * dir, a.yaw0, a.speed * dir};
    }
    case Motion::kTurning: {
      const double yaw = a.yaw0 + a.omega * t;
      const double r = a.speed / a.omega;
      const Vec2 p{a.origin.x + r * (std::sin(yaw) - std::sin(a.yaw0)),
                   a.origin.y - r * (std::cos(yaw) - std::cos(a.yaw0))};
      return {p, yaw, {a.speed * std::cos(yaw), a.speed * std::sin(yaw)}};
    }
  }
  return {};
}

std::string pick_category(const std::map<std::string, double>& mix, double u) {
  double acc = 0.0;
  for (const auto& [name, frac] : mix) {
    acc += frac;
    if (u < acc) return name;
  }
  // u within rounding of 1: last positive entry.
  for (auto it = mix.rbegin(); it != mix.rend(); ++it) {
    if (it->second > 0.0) return it->first;
  }
  return mix.rbegin()->first;
}

std::vector<Agent> make_agents(const SceneSpec& spec, Rng& rng) {
  std::vector<Agent> agents(static_cast<std::size_t>(spec.agents_per_log));
  const double mid = 0.5 * static_cast<double>(spec.agents_per_log - 1);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    Agent& a = agents[i];
    a.id = i + 1;
    a.category = pick_category(spec.categories, rng.uniform());
    const double m = rng.uniform();
    a.motion = m < spec.static_fraction                           ? Motion::kStatic
               : m < spec.static_fraction + spec.linear_fraction ? Motion::kLinear
                                                                  : Motion::kTurning;
    const Profile prof = profile_of(a.category);
    a.size = {prof.size.x * rng.uniform(0.9, 1.1), prof.size.y * rng.uniform(0.9, 1.1),
              prof.size.z * rng.uniform(0.9, 1.1)};
    // One agent per lane; lanes are wide enough for the largest turning circle.
    a.origin = {rng.uniform(-40.0, 40.0), (static_cast<double>(i) - mid) * kLaneSpacing};
    const double heading = rng.bernoulli(0.5) ? 0.0 : kPi;
    const double speed = rng.uniform(prof.min_speed, prof.max_speed);
    const double radius = rng.uniform(2.0, 3.5);
    const double turn = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double free_yaw = rng.uniform(-kPi, kPi);
    switch (a.motion) {
      case Motion::kStatic:
        a.yaw0 = free_yaw;
        break;
      case Motion::kLinear:
        a.yaw0 = heading;
        a.speed = speed;
        break;
      case Motion::kTurning:
        a.yaw0 = heading;
        a.speed = std::min(speed, 5.0);
        a.omega = turn * a.speed / radius;
        break;
    }
  }
  return agents;
}

Box3D box_at(const Agent& a, double t) {
  const Pose p = pose_at(a, t);
  return Box3D({p.position.x, p.position.y, 0.5 * a.size.z}, a.size, p.yaw, p.velocity, 1.0,
               a.category);
}

core::Trajectory future_of(const Agent& a, double t, const SceneSpec& spec) {
  core::Trajectory traj;
  traj.step_period = spec.step_period;
  for (int j = 1; j <= spec.horizon; ++j) {
    traj.waypoints.push_back(pose_at(a, t + j * spec.step_period).position);
  }
  return traj;
}

// Mode scores proportional to K, K-1, ..., 1.
std::vector<double> mode_scores(int k) {
  std::vector<double> s(static_cast<std::size_t>(k));
  const double total = 0.5 * k * (k + 1);
  for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = (k - i) / total;
  return s;
}

struct LogOutput {
  std::vector<std::pair<FrameKey, core::Frame>> gt_tracks;
  std::vector<std::pair<FrameKey, core::Frame>> gt_futures;
  std::vector<std::vector<std::pair<FrameKey, core::Frame>>> tracks;
  std::vector<std::vector<std::pair<FrameKey, core::Frame>>> forecasts;
};

std::vector<Entry> simulate_frame(const std::vector<Agent>& agents,
                                  const std::vector<Entry>& truth, std::size_t frame,
                                  const SceneSpec& spec, const NoiseModel& nm, Rng& rng,
                                  Rng& fp_rng, std::vector<Entry>& forecasts) {
  std::vector<Entry> out;
  const auto scores = mode_scores(nm.num_modes);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Box3D& g = truth[i].box;
    // Fixed number of draws per agent so outputs at different sigmas stay
    // paired draw for draw.
    const bool dropped = rng.bernoulli(nm.drop_rate);
    const double nx = rng.normal(), ny = rng.normal();
    const double sl = rng.normal(), sw = rng.normal(), sh = rng.normal();
    const double nyaw = rng.normal();
    const double nvx = rng.normal(), nvy = rng.normal();
    const double u_score = rng.uniform();
    std::vector<Vec2> walk(static_cast<std::size_t>(spec.horizon));
    for (auto& w : walk) w = {rng.normal(), rng.normal()};

    if (dropped) continue;
    const Vec3 center{g.center.x + nm.center_sigma * nx, g.center.y + nm.center_sigma * ny,
                      g.center.z};
    const Vec3 size{g.size.x * std::exp(nm.size_sigma * sl),
                    g.size.y * std::exp(nm.size_sigma * sw),
                    g.size.z * std::exp(nm.size_sigma * sh)};
    const double dyaw = nm.yaw_sigma * nyaw;
    const Vec2 velocity{g.velocity.x + nm.center_sigma * nvx,
                        g.velocity.y + nm.center_sigma * nvy};
    const double err = std::hypot(center.x - g.center.x, center.y - g.center.y) + std::abs(dyaw);
    const double score =
        std::clamp(std::exp(-err) * (1.0 - nm.score_noise * u_score), 0.0, 1.0);
    Entry e;
    e.box = Box3D(center, size, g.yaw + dyaw, velocity, score, g.category);
    e.track_id = agents[i].id;
    out.push_back(e);

    Entry f;
    f.box = e.box;
    const auto& gt_future = truth[i].modes.front().trajectory;
    const Vec2 shift{center.x - g.center.x, center.y - g.center.y};
    const Vec2 lateral{-std::sin(e.box.yaw), std::cos(e.box.yaw)};
    for (int k = 0; k < nm.num_modes; ++k) {
      core::Mode mode;
      mode.score = scores[static_cast<std::size_t>(k)];
      mode.trajectory.step_period = spec.step_period;
      Vec2 acc{0.0, 0.0};
      // Alternative modes fan out sideways, alternating sides.
      const double side = k == 0 ? 0.0 : ((k % 2) ? 1.0 : -1.0) * ((k + 1) / 2) * 1.5;
      for (int j = 0; j < spec.horizon; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        acc = acc + nm.trajectory_sigma * walk[ju];
        const double fan = side * (j + 1) / spec.horizon;
        mode.trajectory.waypoints.push_back(gt_future.waypoints[ju] + shift + acc +
                                            fan * lateral);
      }
      f.modes.push_back(std::move(mode));
    }
    forecasts.push_back(std::move(f));
  }

  // False positives come from their own stream so their count never shifts
  // the paired agent draws.
  std::uint64_t fp_index = 0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!fp_rng.bernoulli(nm.fp_rate)) continue;
    const std::string cat = pick_category(spec.categories, fp_rng.uniform());
    const Profile prof = profile_of(cat);
    const double mid = 0.5 * static_cast<double>(agents.size() - 1);
    const Vec2 at{fp_rng.uniform(-60.0, 60.0),
                  fp_rng.uniform(-mid * kLaneSpacing - 8.0, mid * kLaneSpacing + 8.0)};
    const double yaw = fp_rng.uniform(-kPi, kPi);
    const double speed = fp_rng.uniform(0.0, prof.max_speed);
    const double score = fp_rng.uniform(0.0, 0.5);
    const Vec2 vel{speed * std::cos(yaw), speed * std::sin(yaw)};
    Entry e;
    e.box = Box3D({at.x, at.y, 0.5 * prof.size.z}, prof.size, yaw, vel, score, cat);
    e.track_id = kFalsePositiveIdBase + frame * agents.size() + fp_index++;
    out.push_back(e);

    Entry f;
    f.box = e.box;
    for (int k = 0; k < nm.num_modes; ++k) {
      core::Mode mode;
      mode.score = scores[static_cast<std::size_t>(k)];
      mode.trajectory.step_period = spec.step_period;
      for (int j = 1; j <= spec.horizon; ++j) {
        mode.trajectory.waypoints.push_back(at + (j * spec.step_period) * vel);
      }
      f.modes.push_back(std::move(mode));
    }
    forecasts.push_back(std::move(f));
  }
  return out;
}

LogOutput generate_log(const SceneSpec& spec, std::size_t log) {
  LogOutput out;
  Rng world(core::mix_seed(spec.seed, 2 * log));
  const auto agents = make_agents(spec, world);
  char name[32];
  std::snprintf(name, sizeof(name), "log_%04zu", log);
  const auto step_ns = static_cast<std::uint64_t>(std::llround(spec.step_period * 1e9));

  std::vector<std::vector<Entry>> truth(static_cast<std::size_t>(spec.frames_per_log));
  for (int k = 0; k < spec.frames_per_log; ++k) {
    const FrameKey key{name, kLogStartNs + static_cast<std::uint64_t>(k) * step_ns};
    const double t = k * spec.step_period;
    core::Frame tracks, futures;
    for (const auto& a : agents) {
      Entry e;
      e.box = box_at(a, t);
      e.track_id = a.id;
      tracks.push_back(e);
      Entry f;
      f.box = e.box;
      f.modes.push_back({future_of(a, t, spec), 1.0});
      futures.push_back(std::move(f));
    }
    truth[static_cast<std::size_t>(k)] = futures;
    out.gt_tracks.emplace_back(key, std::move(tracks));
    out.gt_futures.emplace_back(key, std::move(futures));
  }

  const std::uint64_t model_seed = core::mix_seed(spec.seed, 2 * log + 1);
  out.tracks.resize(spec.models.size());
  out.forecasts.resize(spec.models.size());
  for (std::size_t m = 0; m < spec.models.size(); ++m) {
    Rng rng(core::mix_seed(model_seed, 2 * m));
    Rng fp_rng(core::mix_seed(model_seed, 2 * m + 1));
    for (int k = 0; k < spec.frames_per_log; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      std::vector<Entry> forecasts;
      auto tracks = simulate_frame(agents, truth[ku], ku, spec,
                                   spec.models[m], rng, fp_rng, forecasts);
      out.tracks[m].emplace_back(out.gt_tracks[ku].first, std::move(tracks));
      out.forecasts[m].emplace_back(out.gt_tracks[ku].first, std::move(forecasts));
    }
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError("scene spec: " + message);
}

double number(const nlohmann::json& v, const std::string& key) {
  require(v.is_number(), "'" + key + "' must be a number");
  return v.get<double>();
}

int integer(const nlohmann::json& v, const std::string& key) {
  require(v.is_number_integer(), "'" + key + "' must be an integer");
  return v.get<int>();
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  require(j.is_object(), "each model must be an object");
  NoiseModel nm;
  for (const auto& [key, v] : j.items()) {
    if (key == "id") {
      require(v.is_string(), "model 'id' must be a string");
      nm.id = v.get<std::string>();
    } else if (key == "weight") {
      nm.weight = number(v, key);
    } else if (key == "center_sigma") {
      nm.center_sigma = number(v, key);
    } else if (key == "size_sigma") {
      nm.size_sigma = number(v, key);
    } else if (key == "yaw_sigma") {
      nm.yaw_sigma = number(v, key);
    } else if (key == "score_noise") {
      nm.score_noise = number(v, key);
    } else if (key == "drop_rate") {
      nm.drop_rate = number(v, key);
    } else if (key == "fp_rate") {
      nm.fp_rate = number(v, key);
    } else if (key == "trajectory_sigma") {
      nm.trajectory_sigma = number(v, key);
    } else if (key == "num_modes") {
      nm.num_modes = integer(v, key);
    } else {
      require(false, "unknown model field '" + key + "'");
    }
  }
  return nm;
}

}  // namespace

void validate(const SceneSpec& spec) {
  require(spec.num_logs >= 1, "num_logs must be at least 1");
  require(spec.frames_per_log >= 1, "frames_per_log must be at least 1");
  require(spec.agents_per_log >= 1, "agents_per_log must be at least 1");
  require(spec.horizon >= 1, "horizon must be at least 1");
  require(spec.step_period > 0.0 && std::isfinite(spec.step_period),
          "step_period must be positive");
  require(!spec.categories.empty(), "categories must not be empty");
  double cat_sum = 0.0;
  for (const auto& [name, frac] : spec.categories) {
    require(core::CategoryRegistry::default_registry().contains(name),
            "unknown category '" + name + "'");
    require(frac >= 0.0, "category fractions must be non-negative");
    cat_sum += frac;
  }
  require(std::abs(cat_sum - 1.0) <= 1e-9, "category fractions must sum to 1");
  require(spec.static_fraction >= 0.0 && spec.linear_fraction >= 0.0 &&
              spec.turning_fraction >= 0.0,
          "motion fractions must be non-negative");
  require(std::abs(spec.static_fraction + spec.linear_fraction + spec.turning_fraction - 1.0) <=
              1e-9,
          "motion fractions must sum to 1");
  require(!spec.models.empty(), "at least one model is required");
  std::set<std::string> ids;
  for (const auto& m : spec.models) {
    require(!m.id.empty(), "model id must not be empty");
    require(std::all_of(m.id.begin(), m.id.end(),
                        [](char c) {
                          return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                                 c == '-' || c == '.';
                        }),
            "model id '" + m.id + "' must use only letters, digits, '_', '-' or '.'");
    require(ids.insert(m.id).second, "duplicate model id '" + m.id + "'");
    require(m.weight > 0.0 && std::isfinite(m.weight), "model weight must be positive");
    for (double s : {m.center_sigma, m.size_sigma, m.yaw_sigma, m.trajectory_sigma}) {
      require(s >= 0.0 && std::isfinite(s), "sigmas must be finite and non-negative");
    }
    for (double r : {m.score_noise, m.drop_rate, m.fp_rate}) {
      require(r >= 0.0 && r <= 1.0, "rates must lie in [0, 1]");
    }
    require(m.num_modes >= 1, "num_modes must be at least 1");
  }
}

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  require(j.is_object(), "must be a JSON object");
  SceneSpec spec;
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
              "'seed' must be a non-negative integer");
      spec.seed = v.get<std::uint64_t>();
    } else if (key == "num_logs") {
      spec.num_logs = integer(v, key);
    } else if (key == "frames_per_log") {
      spec.frames_per_log = integer(v, key);
    } else if (key == "agents_per_log") {
      spec.agents_per_log = integer(v, key);
    } else if (key == "horizon") {
      spec.horizon = integer(v, key);
    } else if (key == "step_period") {
      spec.step_period = number(v, key);
    } else if (key == "categories") {
      require(v.is_object(), "'categories' must map names to fractions");
      spec.categories.clear();
      for (const auto& [name, frac] : v.items()) spec.categories[name] = number(frac, name);
    } else if (key == "motion_mix") {
      require(v.is_object(), "'motion_mix' must be an object");
      for (const auto& [name, frac] : v.items()) {
        if (name == "static") {
          spec.static_fraction = number(frac, name);
        } else if (name == "linear") {
          spec.linear_fraction = number(frac, name);
        } else if (name == "turning") {
          spec.turning_fraction = number(frac, name);
        } else {
          require(false, "unknown motion class '" + name + "'");
        }
      }
    } else if (key == "models") {
      require(v.is_array(), "'models' must be an array");
      spec.models.clear();
      for (const auto& m : v) spec.models.push_back(noise_from_json(m));
    } else {
      require(false, "unknown field '" + key + "'");
    }
  }
  validate(spec);
  return spec;
}

nlohmann::ordered_json scene_spec_to_json(const SceneSpec& spec) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["num_logs"] = spec.num_logs;
  j["frames_per_log"] = spec.frames_per_log;
  j["agents_per_log"] = spec.agents_per_log;
  j["horizon"] = spec.horizon;
  j["step_period"] = spec.step_period;
  j["categories"] = nlohmann::ordered_json::object();
  for (const auto& [name, frac] : spec.categories) j["categories"][name] = frac;
  j["motion_mix"] = {{"static", spec.static_fraction},
                     {"linear", spec.linear_fraction},
                     {"turning", spec.turning_fraction}};
  j["models"] = nlohmann::ordered_json::array();
  for (const auto& m : spec.models) {
    nlohmann::ordered_json jm;
    jm["id"] = m.id;
    jm["weight"] = m.weight;
    jm["center_sigma"] = m.center_sigma;
    jm["size_sigma"] = m.size_sigma;
    jm["yaw_sigma"] = m.yaw_sigma;
    jm["score_noise"] = m.score_noise;
    jm["drop_rate"] = m.drop_rate;
    jm["fp_rate"] = m.fp_rate;
    jm["trajectory_sigma"] = m.trajectory_sigma;
    jm["num_modes"] = m.num_modes;
    j["models"].push_back(std::move(jm));
  }
  return j;
}

Scene generate(const SceneSpec& spec, int threads) {
  validate(spec);
  std::vector<LogOutput> logs(static_cast<std::size_t>(spec.num_logs));
  core::parallel_for(logs.size(), threads,
                     [&](std::size_t l) { logs[l] = generate_log(spec, l); });

  Scene scene;
  scene.gt_tracks.kind = Kind::kTrack;
  scene.gt_futures.kind = Kind::kForecast;
  scene.models.resize(spec.models.size());
  for (std::size_t m = 0; m < spec.models.size(); ++m) {
    scene.models[m].id = spec.models[m].id;
    scene.models[m].weight = spec.models[m].weight;
    scene.models[m].tracks.kind = Kind::kTrack;
    scene.models[m].forecasts.kind = Kind::kForecast;
  }
  for (auto& log : logs) {
    for (auto& [key, frame] : log.gt_tracks) scene.gt_tracks.frames.emplace(key, std::move(frame));
    for (auto& [key, frame] : log.gt_futures) {
      scene.gt_futures.frames.emplace(key, std::move(frame));
    }
    for (std::size_t m = 0; m < spec.models.size(); ++m) {
      for (auto& [key, frame] : log.tracks[m]) {
        scene.models[m].tracks.frames.emplace(key, std::move(frame));
      }
      for (auto& [key, frame] : log.forecasts[m]) {
        scene.models[m].forecasts.frames.emplace(key, std::move(frame));
      }
    }
  }
  return scene;
}

std::vector<ensemble::ModelOutput> track_outputs(const Scene& scene) {
  std::vector<ensemble::ModelOutput> out;
  for (const auto& m : scene.models) out.push_back({m.id, m.weight, m.tracks});
  return out;
}

std::vector<ensemble::ModelOutput> forecast_outputs(const Scene& scene) {
  std::vector<ensemble::ModelOutput> out;
  for (const auto& m : scene.models) out.push_back({m.id, m.weight, m.forecasts});
  return out;
}

}  // namespace perceval::synth
