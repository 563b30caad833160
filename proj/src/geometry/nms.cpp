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

#include "perceval/geometry/nms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "perceval/core/error.hpp"
#include "perceval/geometry/geometry.hpp"

namespace perceval::geometry {

std::vector<std::size_t> nms_indices(std::span<const core::Box3D> boxes,
                                     double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw core::ValidationError("nms: iou_threshold must lie in [0, 1]");
  }
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].score > boxes[b].score;
  });

  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const auto& cand = boxes[idx];
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return boxes[k].category == cand.category &&
             bev_iou(boxes[k], cand) > iou_threshold;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<core::Box3D> nms(std::span<const core::Box3D> boxes,
                             double iou_threshold) {
  std::vector<core::Box3D> out;
  for (std::size_t i : nms_indices(boxes, iou_threshold)) out.push_back(boxes[i]);
  return out;
}

}  // namespace perceval::geometry
