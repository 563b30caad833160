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

#include "perceval/dataops/voxel.hpp"

#include <cmath>
#include <limits>

#include "perceval/core/error.hpp"
#include "perceval/core/parallel.hpp"

namespace perceval::dataops {

namespace {

using core::ValidationError;

constexpr std::uint64_t kOutOfRange = std::numeric_limits<std::uint64_t>::max();

std::array<double, 3> as_array(const core::Vec3& v) { return {v.x, v.y, v.z}; }

core::Vec3 vec3_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw ValidationError(std::string("'") + key + "' must be an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::array<std::int64_t, 3> VoxelGridConfig::dims() const {
  const auto lo = as_array(range_min);
  const auto hi = as_array(range_max);
  const auto sz = as_array(voxel_size);
  std::array<std::int64_t, 3> d{};
  for (int a = 0; a < 3; ++a) d[a] = std::llround((hi[a] - lo[a]) / sz[a]);
  return d;
}

void validate(const VoxelGridConfig& cfg) {
  const auto lo = as_array(cfg.range_min);
  const auto hi = as_array(cfg.range_max);
  const auto sz = as_array(cfg.voxel_size);
  for (int a = 0; a < 3; ++a) {
    if (!(sz[a] > 0.0)) throw ValidationError("voxel_size must be positive");
    if (!(hi[a] > lo[a])) throw ValidationError("range_max must exceed range_min");
    const double cells = (hi[a] - lo[a]) / sz[a];
    if (std::abs(cells - std::round(cells)) > 1e-6) {
      throw ValidationError("range extent is not a whole number of voxels");
    }
  }
  if (cfg.max_points_per_voxel < 1) {
    throw ValidationError("max_points_per_voxel must be at least 1");
  }
  const auto d = cfg.dims();
  if (static_cast<double>(d[0]) * static_cast<double>(d[1]) * static_cast<double>(d[2]) >
      9.0e18) {
    throw ValidationError("voxel grid too large to index");
  }
}

VoxelGridConfig voxel_config_from_json(const nlohmann::json& j, VoxelGridConfig cfg) {
  if (!j.is_object()) throw ValidationError("voxel config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "voxel_size") {
      cfg.voxel_size = vec3_from_json(value, "voxel_size");
    } else if (key == "range_min") {
      cfg.range_min = vec3_from_json(value, "range_min");
    } else if (key == "range_max") {
      cfg.range_max = vec3_from_json(value, "range_max");
    } else if (key == "max_points_per_voxel") {
      if (!value.is_number_integer()) {
        throw ValidationError("'max_points_per_voxel' must be an integer");
      }
      cfg.max_points_per_voxel = value.get<int>();
    } else {
      throw ValidationError("unknown voxel config field '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

nlohmann::ordered_json voxel_config_to_json(const VoxelGridConfig& cfg) {
  nlohmann::ordered_json j;
  j["voxel_size"] = {cfg.voxel_size.x, cfg.voxel_size.y, cfg.voxel_size.z};
  j["range_min"] = {cfg.range_min.x, cfg.range_min.y, cfg.range_min.z};
  j["range_max"] = {cfg.range_max.x, cfg.range_max.y, cfg.range_max.z};
  j["max_points_per_voxel"] = cfg.max_points_per_voxel;
  return j;
}

VoxelGrid::VoxelGrid(std::array<std::int64_t, 3> dims, std::vector<Voxel> voxels,
                     VoxelStats stats)
    : dims_(dims), voxels_(std::move(voxels)), stats_(stats) {
  lookup_.reserve(voxels_.size());
  for (std::size_t i = 0; i < voxels_.size(); ++i) {
    lookup_.emplace(linear(voxels_[i].index), static_cast<std::uint32_t>(i));
  }
}

VoxelGrid::VoxelGrid(std::array<std::int64_t, 3> dims, std::vector<Voxel> voxels,
                     VoxelStats stats, std::unordered_map<std::uint64_t, std::uint32_t> lookup)
    : dims_(dims), voxels_(std::move(voxels)), lookup_(std::move(lookup)), stats_(stats) {}

std::uint64_t VoxelGrid::linear(const std::array<std::int64_t, 3>& index) const {
  return (static_cast<std::uint64_t>(index[0]) * static_cast<std::uint64_t>(dims_[1]) +
          static_cast<std::uint64_t>(index[1])) *
             static_cast<std::uint64_t>(dims_[2]) +
         static_cast<std::uint64_t>(index[2]);
}

const Voxel* VoxelGrid::find(const std::array<std::int64_t, 3>& index) const {
  for (int a = 0; a < 3; ++a) {
    if (index[a] < 0 || index[a] >= dims_[a]) return nullptr;
  }
  auto it = lookup_.find(linear(index));
  return it == lookup_.end() ? nullptr : &voxels_[it->second];
}

VoxelGrid voxelize(std::span<const Point> points, const VoxelGridConfig& cfg, int threads) {
  validate(cfg);
  const auto dims = cfg.dims();
  const auto lo = as_array(cfg.range_min);
  const auto hi = as_array(cfg.range_max);
  const auto sz = as_array(cfg.voxel_size);

  // Pass 1: linear voxel key per point, parallel over fixed chunks.
  std::vector<std::uint64_t> keys(points.size());
  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t chunks = (points.size() + kChunk - 1) / kChunk;
  core::parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(points.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const Point& p = points[i];
      const double v[3] = {p.x, p.y, p.z};
      std::uint64_t key = 0;
      bool inside = true;
      for (int a = 0; a < 3 && inside; ++a) {
        if (!(v[a] >= lo[a] && v[a] < hi[a])) {
          inside = false;
          break;
        }
        auto idx = static_cast<std::int64_t>(std::floor((v[a] - lo[a]) / sz[a]));
        idx = std::clamp<std::int64_t>(idx, 0, dims[a] - 1);
        key = key * static_cast<std::uint64_t>(dims[a]) + static_cast<std::uint64_t>(idx);
      }
      keys[i] = inside ? key : kOutOfRange;
    }
  });

  // Pass 2: sequential insertion keeps per-voxel arrival order.
  VoxelStats stats;
  stats.input = points.size();
  std::vector<Voxel> voxels;
  std::unordered_map<std::uint64_t, std::uint32_t> slot;
  slot.reserve(points.size());
  const auto cap = static_cast<std::size_t>(cfg.max_points_per_voxel);
  const std::uint64_t yz = static_cast<std::uint64_t>(dims[1]) * static_cast<std::uint64_t>(dims[2]);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::uint64_t key = keys[i];
    if (key == kOutOfRange) {
      ++stats.out_of_range;
      continue;
    }
    auto [it, inserted] = slot.try_emplace(key, static_cast<std::uint32_t>(voxels.size()));
    if (inserted) {
      Voxel v;
      v.index = {static_cast<std::int64_t>(key / yz),
                 static_cast<std::int64_t>((key / static_cast<std::uint64_t>(dims[2])) %
                                           static_cast<std::uint64_t>(dims[1])),
                 static_cast<std::int64_t>(key % static_cast<std::uint64_t>(dims[2]))};
      voxels.push_back(std::move(v));
    }
    Voxel& v = voxels[it->second];
    if (v.points.size() < cap) {
      v.points.push_back(points[i]);
      ++stats.kept;
    } else {
      ++v.overflow;
      ++stats.overflow;
    }
  }

  for (auto& v : voxels) {
    double sx = 0.0, sy = 0.0, sz_ = 0.0;
    for (const auto& p : v.points) {
      sx += p.x;
      sy += p.y;
      sz_ += p.z;
    }
    const double n = static_cast<double>(v.points.size());
    v.centroid = {sx / n, sy / n, sz_ / n};
  }
  return VoxelGrid(dims, std::move(voxels), stats, std::move(slot));
}

nlohmann::ordered_json voxel_summary(const VoxelGrid& grid) {
  nlohmann::ordered_json j;
  j["dims"] = grid.dims();
  j["occupied"] = grid.voxels().size();
  j["overflow"] = grid.stats().overflow;
  j["input_points"] = grid.stats().input;
  j["out_of_range"] = grid.stats().out_of_range;
  j["kept_points"] = grid.stats().kept;
  return j;
}

}  // namespace perceval::dataops
