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

#include "perceval/dataops/points_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "perceval/core/error.hpp"
#include "perceval/core/io.hpp"

namespace perceval::dataops {

namespace {

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
}

}  // namespace

std::filesystem::path points_header_path(const std::filesystem::path& data) {
  auto p = data;
  p += ".json";
  return p;
}

std::vector<Point> read_points(const std::filesystem::path& data) {
  const auto header_text = core::read_text(points_header_path(data));
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw core::ValidationError("point header: " + std::string(e.what()));
  }
  if (!header.is_object() || !header.contains("count") ||
      !header["count"].is_number_unsigned()) {
    throw core::ValidationError("point header needs a non-negative integer 'count'");
  }
  const auto count = header["count"].get<std::uint64_t>();

  std::ifstream in(data, std::ios::binary);
  if (!in) throw core::IoError("cannot open " + data.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  if (bytes != count * 16) {
    throw core::ValidationError("point file holds " + std::to_string(bytes) +
                                " bytes but header announces " + std::to_string(count) +
                                " points");
  }
  std::vector<std::uint32_t> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw core::IoError("read failed for " + data.string());

  std::vector<Point> points(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    float f[4];
    for (int k = 0; k < 4; ++k) {
      const std::uint32_t w = to_little(raw[i * 4 + k]);
      std::memcpy(&f[k], &w, sizeof(float));
    }
    points[i] = {f[0], f[1], f[2], f[3]};
  }
  return points;
}

void write_points(const std::vector<Point>& points, const std::filesystem::path& data) {
  std::string blob(points.size() * 16, '\0');
  for (std::size_t i = 0; i < points.size(); ++i) {
    const float f[4] = {points[i].x, points[i].y, points[i].z, points[i].intensity};
    for (int k = 0; k < 4; ++k) {
      std::uint32_t w;
      std::memcpy(&w, &f[k], sizeof(float));
      w = to_little(w);
      std::memcpy(&blob[i * 16 + k * 4], &w, sizeof(w));
    }
  }
  core::write_text_atomic(data, blob);
  nlohmann::ordered_json header;
  header["count"] = points.size();
  core::write_text_atomic(points_header_path(data), header.dump() + "\n");
}

}  // namespace perceval::dataops
