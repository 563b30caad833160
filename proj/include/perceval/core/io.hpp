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
#include <iosfwd>
#include <string>

#include "perceval/core/types.hpp"

namespace perceval::core {

// JSON-lines frame sets, one frame per line:
//   {"log_id": str, "timestamp_ns": int, "boxes": [{"cx","cy","cz","l","w","h",
//    "yaw","vx","vy","score","category", "track_id"?, "modes"?}]}
// track_id is present exactly for Kind::kTrack, modes exactly for
// Kind::kForecast. Doubles are written in shortest round-trip form so
// read(write(fs)) == fs.

FrameSet parse_frameset(std::istream& in, Kind kind);
void serialize_frameset(const FrameSet& fs, std::ostream& out);

FrameSet read_frameset(const std::filesystem::path& path, Kind kind);
void write_frameset(const FrameSet& fs, const std::filesystem::path& path);

// Guesses the kind from the first record: modes -> forecast, track_id ->
// track, otherwise detection. An empty file reads as detection.
Kind sniff_kind(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames, so a failed run never
// leaves a partial output behind.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& contents);
std::string read_text(const std::filesystem::path& path);

}  // namespace perceval::core
