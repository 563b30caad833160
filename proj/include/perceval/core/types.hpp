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

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perceval::core {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Maps any finite angle into (-pi, pi]. Values already in range are returned
// bit-for-bit unchanged so normalization is idempotent.
inline double normalize_yaw(double yaw) {
  constexpr double kPi = std::numbers::pi;
  if (yaw > -kPi && yaw <= kPi) return yaw;
  if (!std::isfinite(yaw)) return yaw;
  double r = std::remainder(yaw, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

// Oriented 3D box in the ego frame at its frame's timestamp. x forward,
// y left, z up; size is (length, width, height).
struct Box3D {
  Vec3 center;
  Vec3 size{1.0, 1.0, 1.0};
  double yaw = 0.0;
  Vec2 velocity;
  double score = 1.0;
  std::string category;

  Box3D() = default;
  Box3D(Vec3 center_, Vec3 size_, double yaw_, Vec2 velocity_, double score_,
        std::string category_)
      : center(center_),
        size(size_),
        yaw(normalize_yaw(yaw_)),
        velocity(velocity_),
        score(score_),
        category(std::move(category_)) {}

  Vec2 bev_center() const { return {center.x, center.y}; }

  friend bool operator==(const Box3D&, const Box3D&) = default;
};

struct Trajectory {
  std::vector<Vec2> waypoints;
  double step_period = 0.5;

  std::size_t horizon() const { return waypoints.size(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct Mode {
  Trajectory trajectory;
  double score = 1.0;

  friend bool operator==(const Mode&, const Mode&) = default;
};

// One record of a frame. Which optional parts are populated depends on the
// owning FrameSet's kind: track_id for tracks, modes for forecasts.
struct Entry {
  Box3D box;
  std::optional<std::uint64_t> track_id;
  std::vector<Mode> modes;

  friend bool operator==(const Entry&, const Entry&) = default;
};

enum class Kind { kGroundTruth, kDetection, kTrack, kForecast };

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

struct FrameKey {
  std::string log_id;
  std::uint64_t timestamp_ns = 0;

  friend auto operator<=>(const FrameKey&, const FrameKey&) = default;
  friend bool operator==(const FrameKey&, const FrameKey&) = default;
};

std::string to_string(const FrameKey& key);

using Frame = std::vector<Entry>;

// Frames ordered by (log_id, timestamp_ns); iteration within a log is in
// strictly increasing time.
struct FrameSet {
  Kind kind = Kind::kDetection;
  std::map<FrameKey, Frame> frames;

  std::size_t num_entries() const;

  friend bool operator==(const FrameSet&, const FrameSet&) = default;
};

// Convenience accessors used by the ensemble and metric code.
std::vector<Box3D> boxes_of(const Frame& frame);

}  // namespace perceval::core
