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
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "perceval/core/types.hpp"

namespace perceval::dataops {

struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;

  friend bool operator==(const Point&, const Point&) = default;
};

struct VoxelGridConfig {
  core::Vec3 voxel_size{0.075, 0.075, 0.2};
  core::Vec3 range_min{-54.0, -54.0, -3.0};
  core::Vec3 range_max{54.0, 54.0, 3.0};
  int max_points_per_voxel = 10;

  // Number of voxels per axis, (range_max - range_min) / voxel_size rounded.
  std::array<std::int64_t, 3> dims() const;
};

// Throws ValidationError unless sizes are positive, the range is non-empty,
// each extent is a whole number of voxels (within 1e-6), and
// max_points_per_voxel >= 1.
void validate(const VoxelGridConfig& cfg);

VoxelGridConfig voxel_config_from_json(const nlohmann::json& j, VoxelGridConfig base = {});
nlohmann::ordered_json voxel_config_to_json(const VoxelGridConfig& cfg);

struct Voxel {
  std::array<std::int64_t, 3> index{};
  // Kept points in input order, at most max_points_per_voxel.
  std::vector<Point> points;
  std::size_t overflow = 0;
  std::array<double, 3> centroid{};
};

struct VoxelStats {
  std::size_t input = 0;
  std::size_t out_of_range = 0;
  std::size_t overflow = 0;
  std::size_t kept = 0;
};

class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(std::array<std::int64_t, 3> dims, std::vector<Voxel> voxels, VoxelStats stats);
  // Adopts a ready lookup from row-major linear index to position in voxels.
  VoxelGrid(std::array<std::int64_t, 3> dims, std::vector<Voxel> voxels, VoxelStats stats,
            std::unordered_map<std::uint64_t, std::uint32_t> lookup);

  const std::array<std::int64_t, 3>& dims() const { return dims_; }
  // Occupied voxels in order of first occupancy.
  const std::vector<Voxel>& voxels() const { return voxels_; }
  const VoxelStats& stats() const { return stats_; }

  const Voxel* find(const std::array<std::int64_t, 3>& index) const;

 private:
  std::uint64_t linear(const std::array<std::int64_t, 3>& index) const;

  std::array<std::int64_t, 3> dims_{};
  std::vector<Voxel> voxels_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
  VoxelStats stats_;
};

// Bins points into the half-open range [range_min, range_max) with voxel
// index floor((p - range_min) / voxel_size). Overflowing points are dropped in
// arrival order. Index computation may run on `threads` workers; the result
// is identical for every thread count.
VoxelGrid voxelize(std::span<const Point> points, const VoxelGridConfig& cfg,
                   int threads = 1);

nlohmann::ordered_json voxel_summary(const VoxelGrid& grid);

}  // namespace perceval::dataops
