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

#include "perceval/core/validate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "perceval/core/error.hpp"

namespace perceval::core {

namespace {

bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

bool finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

void check_box(const Box3D& b, const CategoryRegistry& registry,
               const auto& report) {
  if (!finite(b.center) || !finite(b.size) || !std::isfinite(b.yaw) ||
      !finite(b.velocity) || !std::isfinite(b.score)) {
    report("non-finite value");
    return;
  }
  if (b.size.x <= 0.0 || b.size.y <= 0.0 || b.size.z <= 0.0) {
    report("non-positive size");
  }
  if (b.score < 0.0 || b.score > 1.0) report("score out of range");
  if (!(b.yaw > -std::numbers::pi && b.yaw <= std::numbers::pi)) {
    report("yaw not normalized");
  }
  if (b.category.empty()) {
    report("empty category");
  } else if (!registry.contains(b.category)) {
    report("unknown category");
  }
}

void check_modes(const Entry& e, const auto& report) {
  if (e.modes.empty()) {
    report("missing modes");
    return;
  }
  const std::size_t horizon = e.modes.front().trajectory.horizon();
  const double period = e.modes.front().trajectory.step_period;
  for (const auto& m : e.modes) {
    if (!std::isfinite(m.score) || m.score < 0.0 || m.score > 1.0) {
      report("mode score out of range");
    }
    if (m.trajectory.waypoints.empty()) {
      report("empty trajectory");
    }
    if (m.trajectory.horizon() != horizon ||
        m.trajectory.step_period != period) {
      report("inconsistent horizon");
    }
    if (!(m.trajectory.step_period > 0.0)) report("non-positive step_period");
    for (const auto& w : m.trajectory.waypoints) {
      if (!finite(w)) {
        report("non-finite waypoint");
        break;
      }
    }
  }
}

}  // namespace

std::string Violation::describe() const {
  std::ostringstream os;
  os << to_string(frame);
  if (entity) os << " entity " << *entity;
  os << ": " << rule;
  return os.str();
}

std::vector<Violation> validate_frameset(const FrameSet& fs,
                                         const CategoryRegistry& registry) {
  std::vector<Violation> out;
  for (const auto& [key, frame] : fs.frames) {
    if (key.log_id.empty()) out.push_back({key, std::nullopt, "empty log_id"});
    std::unordered_set<std::uint64_t> seen_ids;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const Entry& e = frame[i];
      auto report = [&](const char* rule) { out.push_back({key, i, rule}); };
      check_box(e.box, registry, report);

      if (fs.kind == Kind::kTrack) {
        if (!e.track_id) {
          report("missing track_id");
        } else if (!seen_ids.insert(*e.track_id).second) {
          report("duplicate track_id");
        }
      } else if (e.track_id) {
        report("unexpected track_id");
      }

      if (fs.kind == Kind::kForecast) {
        check_modes(e, report);
      } else if (!e.modes.empty()) {
        report("unexpected modes");
      }
    }
  }
  return out;
}

void require_valid(const FrameSet& fs, const std::string& what,
                   const CategoryRegistry& registry) {
  const auto violations = validate_frameset(fs, registry);
  if (violations.empty()) return;
  std::ostringstream os;
  os << what << ": " << violations.size() << " invariant violation(s)";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    os << "\n  " << violations[i].describe();
  }
  throw ValidationError(os.str());
}

}  // namespace perceval::core
