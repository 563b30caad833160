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

#include "perceval/dataops/cbgs.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>

#include "perceval/core/error.hpp"
#include "perceval/core/random.hpp"

namespace perceval::dataops {

using core::ValidationError;

std::vector<double> cbgs_weights(const DatasetIndex& index) {
  if (index.entries.empty()) throw ValidationError("cbgs: empty dataset index");
  std::map<std::string, std::size_t> containing;
  for (const auto& e : index.entries) {
    for (const auto& [cat, n] : e.counts) {
      if (n > 0) ++containing[cat];
    }
  }
  if (containing.empty()) throw ValidationError("cbgs: index has no labeled instance");

  const double total = static_cast<double>(index.entries.size());
  std::vector<double> w(index.entries.size(), 0.0);
  double min_positive = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < index.entries.size(); ++i) {
    for (const auto& [cat, n] : index.entries[i].counts) {
      if (n == 0) continue;
      w[i] += total / static_cast<double>(containing.at(cat));
    }
    if (w[i] > 0.0) min_positive = std::min(min_positive, w[i]);
  }
  for (double& x : w) {
    if (x == 0.0) x = min_positive;
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

std::vector<std::size_t> resample_indices(std::span<const double> weights, std::size_t n,
                                          std::uint64_t seed) {
  if (weights.empty()) throw ValidationError("resample: no weights");
  if (n < 1) throw ValidationError("resample: n must be at least 1");
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("resample: weights must be finite and non-negative");
    }
    acc += weights[i];
    cumulative[i] = acc;
  }
  if (!(acc > 0.0)) throw ValidationError("resample: weights sum to zero");

  core::Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx >= weights.size()) idx = weights.size() - 1;
    // Skip zero-weight slots that share a cumulative value with their
    // predecessor.
    while (weights[idx] == 0.0 && idx + 1 < weights.size()) ++idx;
    out[k] = idx;
  }
  return out;
}

std::vector<core::FrameKey> resample(const DatasetIndex& index, std::span<const double> weights,
                                     std::size_t n, std::uint64_t seed) {
  if (weights.size() != index.entries.size()) {
    throw ValidationError("resample: weight count does not match the index");
  }
  std::vector<core::FrameKey> out;
  out.reserve(n);
  for (std::size_t i : resample_indices(weights, n, seed)) out.push_back(index.entries[i].key);
  return out;
}

DatasetIndex index_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw ValidationError("dataset index needs an 'entries' array");
  }
  DatasetIndex idx;
  std::size_t pos = 0;
  for (const auto& je : j["entries"]) {
    const std::string where = "dataset index entry " + std::to_string(pos++);
    if (!je.is_object() || !je.contains("log_id") || !je["log_id"].is_string() ||
        !je.contains("timestamp_ns") || !je["timestamp_ns"].is_number_unsigned()) {
      throw ValidationError(where + ": needs 'log_id' and non-negative 'timestamp_ns'");
    }
    IndexEntry e;
    e.key = {je["log_id"].get<std::string>(), je["timestamp_ns"].get<std::uint64_t>()};
    if (je.contains("counts")) {
      if (!je["counts"].is_object()) throw ValidationError(where + ": 'counts' must be an object");
      for (const auto& [cat, n] : je["counts"].items()) {
        if (!n.is_number_unsigned()) {
          throw ValidationError(where + ": counts must be non-negative integers");
        }
        e.counts[cat] = n.get<std::uint64_t>();
      }
    }
    idx.entries.push_back(std::move(e));
  }
  return idx;
}

nlohmann::ordered_json index_to_json(const DatasetIndex& index) {
  nlohmann::ordered_json j;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : index.entries) {
    nlohmann::ordered_json je;
    je["log_id"] = e.key.log_id;
    je["timestamp_ns"] = e.key.timestamp_ns;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [cat, n] : e.counts) counts[cat] = n;
    je["counts"] = std::move(counts);
    j["entries"].push_back(std::move(je));
  }
  return j;
}

DatasetIndex index_from_frameset(const core::FrameSet& fs) {
  DatasetIndex idx;
  for (const auto& [key, frame] : fs.frames) {
    IndexEntry e;
    e.key = key;
    for (const auto& entry : frame) ++e.counts[entry.box.category];
    idx.entries.push_back(std::move(e));
  }
  return idx;
}

}  // namespace perceval::dataops
