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

#include <vector>

#include "perceval/core/types.hpp"

namespace perceval::geometry {

// Global test-time augmentation: uniform scaling plus optional mirroring.
// flip_xz mirrors across the xz-plane (y -> -y, yaw -> -yaw); flip_yz mirrors
// across the yz-plane (x -> -x, yaw -> pi - yaw). Scaling multiplies centers,
// sizes, velocities and forecast waypoints.
struct TtaTransform {
  double scale = 1.0;
  bool flip_xz = false;
  bool flip_yz = false;

  friend bool operator==(const TtaTransform&, const TtaTransform&) = default;
};

// The 12 transforms used at inference: scales {0.95, 1, 1.05} crossed with
// {none, flip_xz, flip_yz, both}.
std::vector<TtaTransform> default_tta_transforms();

core::Box3D apply_tta(const core::Box3D& box, const TtaTransform& t);
core::Box3D invert_tta(const core::Box3D& box, const TtaTransform& t);

core::Entry apply_tta(const core::Entry& entry, const TtaTransform& t);
core::Entry invert_tta(const core::Entry& entry, const TtaTransform& t);

// Throws ValidationError when t.scale <= 0.
core::FrameSet apply_tta(const core::FrameSet& fs, const TtaTransform& t);
core::FrameSet invert_tta(const core::FrameSet& fs, const TtaTransform& t);

}  // namespace perceval::geometry
