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

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "perceval/core/types.hpp"

namespace perceval::dataops {

struct IndexEntry {
  core::FrameKey key;
  std::map<std::string, std::uint64_t> counts;
};

struct DatasetIndex {
  std::vector<IndexEntry> entries;
};

// Category-level class balancing. With f_c the fraction of entries that
// contain category c, an entry weighs sum over its categories of 1 / f_c.
// Unlabeled entries get the smallest positive weight. Normalized to sum 1.
// Throws ValidationError for an empty index or one without any label.
std::vector<double> cbgs_weights(const DatasetIndex& index);

// n draws with replacement, proportional to `weights`, from a generator
// seeded with `seed`. Identical arguments give identical output.
std::vector<std::size_t> resample_indices(std::span<const double> weights, std::size_t n,
                                          std::uint64_t seed);
std::vector<core::FrameKey> resample(const DatasetIndex& index,
                                     std::span<const double> weights, std::size_t n,
                                     std::uint64_t seed);

// {"entries": [{"log_id": str, "timestamp_ns": int, "counts": {cat: int}}]}
DatasetIndex index_from_json(const nlohmann::json& j);
nlohmann::ordered_json index_to_json(const DatasetIndex& index);
// One entry per frame with per-category box counts.
DatasetIndex index_from_frameset(const core::FrameSet& fs);

}  // namespace perceval::dataops
