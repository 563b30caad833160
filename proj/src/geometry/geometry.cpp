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

#include "perceval/geometry/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace perceval::geometry {

namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Intersection of segment p->q with the infinite line through a->b.
Vec2 line_intersection(Vec2 p, Vec2 q, Vec2 a, Vec2 b) {
  const double dp = cross(a, b, p);
  const double dq = cross(a, b, q);
  const double t = dp / (dp - dq);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

}  // namespace

double signed_area(std::span<const Vec2> v) {
  if (v.size() < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    acc += p.x * q.y - q.x * p.y;
  }
  return 0.5 * acc;
}

double BevPolygon::area() const { return std::abs(signed_area(vertices)); }

std::array<Vec2, 4> footprint_corners(const Box3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.size.x;
  const double hw = 0.5 * box.size.y;
  const Vec2 ctr = box.bev_center();
  auto corner = [&](double dl, double dw) {
    return Vec2{ctr.x + dl * c - dw * s, ctr.y + dl * s + dw * c};
  };
  return {corner(hl, hw), corner(-hl, hw), corner(-hl, -hw), corner(hl, -hw)};
}

BevPolygon footprint(const Box3D& box) {
  const auto c = footprint_corners(box);
  return {{c.begin(), c.end()}};
}

BevPolygon clip_convex(const BevPolygon& subject, const BevPolygon& clip) {
  std::vector<Vec2> output = subject.vertices;
  const std::size_t n = clip.vertices.size();
  for (std::size_t e = 0; e < n && !output.empty(); ++e) {
    const Vec2 a = clip.vertices[e];
    const Vec2 b = clip.vertices[(e + 1) % n];
    std::vector<Vec2> input;
    input.swap(output);
    for (std::size_t i = 0, m = input.size(); i < m; ++i) {
      const Vec2 cur = input[i];
      const Vec2 prev = input[(i + m - 1) % m];
      const bool cur_in = cross(a, b, cur) >= 0.0;
      const bool prev_in = cross(a, b, prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) output.push_back(line_intersection(prev, cur, a, b));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(line_intersection(prev, cur, a, b));
      }
    }
  }
  return {std::move(output)};
}

double bev_iou(const Box3D& a, const Box3D& b) {
  if (a.center.x == b.center.x && a.center.y == b.center.y &&
      a.size.x == b.size.x && a.size.y == b.size.y && a.yaw == b.yaw) {
    return 1.0;
  }
  const double area_a = a.size.x * a.size.y;
  const double area_b = b.size.x * b.size.y;
  // Cheap rejection on the circumscribed circles.
  const double ra = 0.5 * std::hypot(a.size.x, a.size.y);
  const double rb = 0.5 * std::hypot(b.size.x, b.size.y);
  if (center_distance(a, b) >= ra + rb) return 0.0;

  const double inter = std::max(0.0, clip_convex(footprint(a), footprint(b)).area());
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_distance(const Box3D& a, const Box3D& b) {
  return std::hypot(a.center.x - b.center.x, a.center.y - b.center.y);
}

double yaw_error(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
  return d;
}

}  // namespace perceval::geometry
