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

#include <filesystem>
#include <vector>

#include "perceval/dataops/voxel.hpp"

namespace perceval::dataops {

// Flat little-endian float32 records (x, y, z, intensity) with a sidecar
// JSON header {"count": int} stored next to the data as "<path>.json".
std::filesystem::path points_header_path(const std::filesystem::path& data);

std::vector<Point> read_points(const std::filesystem::path& data);
void write_points(const std::vector<Point>& points, const std::filesystem::path& data);

}  // namespace perceval::dataops
