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

// Internal helpers shared by the detection and forecasting evaluators.

#include <optional>
#include <span>
#include <vector>

#include "perceval/core/types.hpp"
#include "perceval/metrics/hungarian.hpp"

namespace perceval::metrics::detail {

struct RankedPred {
  std::size_t frame;
  const core::Entry* entry;
};

// Sorts predictions by descending score; ties keep frame order, then entry
// order.
void rank_predictions(std::vector<RankedPred>& preds);

// Greedy matching in rank order: each prediction takes the nearest unmatched
// ground truth of its frame strictly closer than `threshold` (BEV center
// distance, ties to the lowest ground-truth index). Returns the matched
// ground-truth index per prediction.
std::vector<std::optional<std::size_t>> greedy_match(
    std::span<const std::vector<const core::Entry*>> gt_by_frame,
    std::span<const RankedPred> preds, double threshold);

// Area under the precision envelope: sum over true positives of
// (1 / num_gt) * max precision at that rank or later.
double average_precision(std::span<const char> tp_in_rank_order,
                         std::size_t num_gt);

// Per-frame assignment that first maximizes the number of pairs with
// distance <= gate, then minimizes their total distance. Pairs beyond the
// gate are discarded.
Assignment gated_min_distance(const CostMatrix& distance, double gate);

// Per-frame assignment maximizing total similarity among pairs with
// similarity >= alpha.
Assignment max_similarity(const CostMatrix& similarity, double alpha);

}  // namespace perceval::metrics::detail
