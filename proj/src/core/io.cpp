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

#include "perceval/core/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "perceval/core/error.hpp"

namespace perceval::core {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kBoxNumberFields[] = {"cx", "cy", "cz", "l", "w",
                                            "h",  "yaw", "vx", "vy", "score"};

double number_field(const json& obj, const char* name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(line, name, "missing");
  if (!it->is_number()) throw ParseError(line, name, "expected a number");
  return it->get<double>();
}

Trajectory parse_waypoints(const json& arr, std::size_t line) {
  if (!arr.is_array()) throw ParseError(line, "waypoints", "expected an array");
  Trajectory t;
  t.waypoints.reserve(arr.size());
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
        !p[1].is_number()) {
      throw ParseError(line, "waypoints", "expected [x, y] pairs");
    }
    t.waypoints.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return t;
}

Entry parse_entry(const json& obj, Kind kind, std::size_t line) {
  if (!obj.is_object()) throw ParseError(line, "boxes", "expected objects");
  double v[10];
  for (int i = 0; i < 10; ++i) v[i] = number_field(obj, kBoxNumberFields[i], line);
  auto cat = obj.find("category");
  if (cat == obj.end()) throw ParseError(line, "category", "missing");
  if (!cat->is_string()) throw ParseError(line, "category", "expected a string");

  Entry e;
  e.box = Box3D({v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6], {v[7], v[8]},
                v[9], cat->get<std::string>());

  auto tid = obj.find("track_id");
  if (kind == Kind::kTrack) {
    if (tid == obj.end()) throw ParseError(line, "track_id", "missing for kind track");
    if (!tid->is_number_unsigned()) {
      throw ParseError(line, "track_id", "expected a non-negative integer");
    }
    e.track_id = tid->get<std::uint64_t>();
  } else if (tid != obj.end()) {
    throw ParseError(line, "track_id",
                     "present but kind is " + std::string(kind_name(kind)));
  }

  auto modes = obj.find("modes");
  if (kind == Kind::kForecast) {
    if (modes == obj.end()) throw ParseError(line, "modes", "missing for kind forecast");
    if (!modes->is_array()) throw ParseError(line, "modes", "expected an array");
    for (const auto& m : *modes) {
      if (!m.is_object()) throw ParseError(line, "modes", "expected objects");
      Mode mode;
      mode.score = number_field(m, "score", line);
      auto wp = m.find("waypoints");
      if (wp == m.end()) throw ParseError(line, "waypoints", "missing");
      mode.trajectory = parse_waypoints(*wp, line);
      e.modes.push_back(std::move(mode));
    }
  } else if (modes != obj.end()) {
    throw ParseError(line, "modes",
                     "present but kind is " + std::string(kind_name(kind)));
  }
  return e;
}

ordered_json entry_to_json(const Entry& e, Kind kind) {
  ordered_json j;
  const Box3D& b = e.box;
  j["cx"] = b.center.x;
  j["cy"] = b.center.y;
  j["cz"] = b.center.z;
  j["l"] = b.size.x;
  j["w"] = b.size.y;
  j["h"] = b.size.z;
  j["yaw"] = b.yaw;
  j["vx"] = b.velocity.x;
  j["vy"] = b.velocity.y;
  j["score"] = b.score;
  j["category"] = b.category;
  if (kind == Kind::kTrack) j["track_id"] = e.track_id.value_or(0);
  if (kind == Kind::kForecast) {
    ordered_json modes = ordered_json::array();
    for (const auto& m : e.modes) {
      ordered_json jm;
      jm["score"] = m.score;
      ordered_json wps = ordered_json::array();
      for (const auto& w : m.trajectory.waypoints) wps.push_back({w.x, w.y});
      jm["waypoints"] = std::move(wps);
      modes.push_back(std::move(jm));
    }
    j["modes"] = std::move(modes);
  }
  return j;
}

}  // namespace

FrameSet parse_frameset(std::istream& in, Kind kind) {
  FrameSet fs;
  fs.kind = kind;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, "<record>", e.what());
    }
    if (!rec.is_object()) throw ParseError(line, "<record>", "expected an object");

    auto log = rec.find("log_id");
    if (log == rec.end()) throw ParseError(line, "log_id", "missing");
    if (!log->is_string()) throw ParseError(line, "log_id", "expected a string");
    auto ts = rec.find("timestamp_ns");
    if (ts == rec.end()) throw ParseError(line, "timestamp_ns", "missing");
    if (!ts->is_number_unsigned()) {
      throw ParseError(line, "timestamp_ns", "expected a non-negative integer");
    }
    auto boxes = rec.find("boxes");
    if (boxes == rec.end()) throw ParseError(line, "boxes", "missing");
    if (!boxes->is_array()) throw ParseError(line, "boxes", "expected an array");

    FrameKey key{log->get<std::string>(), ts->get<std::uint64_t>()};
    Frame frame;
    frame.reserve(boxes->size());
    for (const auto& b : *boxes) frame.push_back(parse_entry(b, kind, line));
    if (!fs.frames.emplace(std::move(key), std::move(frame)).second) {
      throw ParseError(line, "timestamp_ns", "duplicate (log_id, timestamp_ns)");
    }
  }
  return fs;
}

void serialize_frameset(const FrameSet& fs, std::ostream& out) {
  for (const auto& [key, frame] : fs.frames) {
    ordered_json rec;
    rec["log_id"] = key.log_id;
    rec["timestamp_ns"] = key.timestamp_ns;
    ordered_json boxes = ordered_json::array();
    for (const auto& e : frame) boxes.push_back(entry_to_json(e, fs.kind));
    rec["boxes"] = std::move(boxes);
    out << rec.dump() << '\n';
  }
}

FrameSet read_frameset(const std::filesystem::path& path, Kind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_frameset(in, kind);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.field(),
                     std::string("in ") + path.string() + ": " + e.what());
  }
}

void write_frameset(const FrameSet& fs, const std::filesystem::path& path) {
  std::ostringstream os;
  serialize_frameset(fs, os);
  write_text_atomic(path, os.str());
}

Kind sniff_kind(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, "<record>", e.what());
    }
    auto boxes = rec.find("boxes");
    if (boxes == rec.end() || !boxes->is_array()) continue;
    for (const auto& b : *boxes) {
      if (b.contains("modes")) return Kind::kForecast;
      if (b.contains("track_id")) return Kind::kTrack;
      return Kind::kDetection;
    }
  }
  return Kind::kDetection;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace perceval::core
