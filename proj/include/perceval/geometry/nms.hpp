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

#include <cstddef>
#include <span>
#include <vector>

#include "perceval/core/types.hpp"

namespace perceval::geometry {

// Greedy per-category non-maximum suppression. Boxes are visited in
// descending score (stable, so ties keep input order); a box is dropped when
// its BEV IoU with an already kept box of the same category exceeds
// `iou_threshold`. Returns indices into `boxes` in the visiting order.
std::vector<std::size_t> nms_indices(std::span<const core::Box3D> boxes,
                                     double iou_threshold);

std::vector<core::Box3D> nms(std::span<const core::Box3D> boxes,
                             double iou_threshold);

}  // namespace perceval::geometry
