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

#include "perceval/geometry/tta.hpp"

#include <numbers>

#include "perceval/core/error.hpp"

namespace perceval::geometry {

namespace {

using core::Box3D;
using core::Entry;
using core::FrameSet;
using core::Vec2;

void check(const TtaTransform& t) {
  if (!(t.scale > 0.0)) {
    throw core::ValidationError("tta: scale must be positive");
  }
}

// Mirrors are involutions and commute with uniform scaling, so the same
// routine serves both directions.
void mirror(Box3D& b, const TtaTransform& t) {
  if (t.flip_xz) {
    b.center.y = -b.center.y;
    b.velocity.y = -b.velocity.y;
    b.yaw = core::normalize_yaw(-b.yaw);
  }
  if (t.flip_yz) {
    b.center.x = -b.center.x;
    b.velocity.x = -b.velocity.x;
    b.yaw = core::normalize_yaw(std::numbers::pi - b.yaw);
  }
}

void mirror(Vec2& p, const TtaTransform& t) {
  if (t.flip_xz) p.y = -p.y;
  if (t.flip_yz) p.x = -p.x;
}

void scale_by(Box3D& b, double s) {
  b.center = {b.center.x * s, b.center.y * s, b.center.z * s};
  b.size = {b.size.x * s, b.size.y * s, b.size.z * s};
  b.velocity = {b.velocity.x * s, b.velocity.y * s};
}

void scale_by(Vec2& p, double s) { p = {p.x * s, p.y * s}; }

void unscale_by(Box3D& b, double s) {
  b.center = {b.center.x / s, b.center.y / s, b.center.z / s};
  b.size = {b.size.x / s, b.size.y / s, b.size.z / s};
  b.velocity = {b.velocity.x / s, b.velocity.y / s};
}

void unscale_by(Vec2& p, double s) { p = {p.x / s, p.y / s}; }

template <typename Fn>
Entry map_entry(const Entry& in, Fn&& fn) {
  Entry out = in;
  fn(out.box);
  for (auto& m : out.modes) {
    for (auto& w : m.trajectory.waypoints) fn(w);
  }
  return out;
}

template <typename Fn>
FrameSet map_frameset(const FrameSet& fs, Fn&& fn) {
  FrameSet out;
  out.kind = fs.kind;
  for (const auto& [key, frame] : fs.frames) {
    auto& dst = out.frames[key];
    dst.reserve(frame.size());
    for (const auto& e : frame) dst.push_back(fn(e));
  }
  return out;
}

}  // namespace

std::vector<TtaTransform> default_tta_transforms() {
  std::vector<TtaTransform> out;
  for (double s : {0.95, 1.0, 1.05}) {
    out.push_back({s, false, false});
    out.push_back({s, true, false});
    out.push_back({s, false, true});
    out.push_back({s, true, true});
  }
  return out;
}

Box3D apply_tta(const Box3D& box, const TtaTransform& t) {
  check(t);
  Box3D out = box;
  scale_by(out, t.scale);
  mirror(out, t);
  return out;
}

Box3D invert_tta(const Box3D& box, const TtaTransform& t) {
  check(t);
  Box3D out = box;
  mirror(out, t);
  unscale_by(out, t.scale);
  return out;
}

Entry apply_tta(const Entry& entry, const TtaTransform& t) {
  check(t);
  return map_entry(entry, [&](auto& v) {
    scale_by(v, t.scale);
    mirror(v, t);
  });
}

Entry invert_tta(const Entry& entry, const TtaTransform& t) {
  check(t);
  return map_entry(entry, [&](auto& v) {
    mirror(v, t);
    unscale_by(v, t.scale);
  });
}

FrameSet apply_tta(const FrameSet& fs, const TtaTransform& t) {
  check(t);
  return map_frameset(fs, [&](const Entry& e) { return apply_tta(e, t); });
}

FrameSet invert_tta(const FrameSet& fs, const TtaTransform& t) {
  check(t);
  return map_frameset(fs, [&](const Entry& e) { return invert_tta(e, t); });
}

}  // namespace perceval::geometry
