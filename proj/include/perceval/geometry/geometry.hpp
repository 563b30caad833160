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

#include <array>
#include <span>
#include <vector>

#include "perceval/core/types.hpp"

namespace perceval::geometry {

using core::Box3D;
using core::Vec2;

// Convex polygon with counterclockwise vertices.
struct BevPolygon {
  std::vector<Vec2> vertices;

  double area() const;
};

// The four BEV corners of a box footprint, counterclockwise.
std::array<Vec2, 4> footprint_corners(const Box3D& box);
BevPolygon footprint(const Box3D& box);

// Sutherland-Hodgman clip of `subject` against the convex `clip` polygon.
// Touching polygons (shared edge or vertex) yield an empty or zero-area result.
BevPolygon clip_convex(const BevPolygon& subject, const BevPolygon& clip);

// Shoelace area; positive for counterclockwise input.
double signed_area(std::span<const Vec2> vertices);

// Intersection-over-union of the two BEV footprints. No z overlap term.
double bev_iou(const Box3D& a, const Box3D& b);

// Euclidean distance between BEV centers (z ignored).
double center_distance(const Box3D& a, const Box3D& b);

// Smallest absolute angular difference, in [0, pi].
double yaw_error(double a, double b);

}  // namespace perceval::geometry
