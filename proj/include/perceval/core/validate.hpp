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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "perceval/core/category.hpp"
#include "perceval/core/types.hpp"

namespace perceval::core {

struct Violation {
  FrameKey frame;
  // Index of the offending entry within its frame; empty for frame-level rules.
  std::optional<std::size_t> entity;
  std::string rule;

  std::string describe() const;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Reports every invariant breach. Never throws; an empty result means valid.
std::vector<Violation> validate_frameset(
    const FrameSet& fs,
    const CategoryRegistry& registry = CategoryRegistry::default_registry());

// Throws ValidationError summarizing the first few violations, if any.
void require_valid(const FrameSet& fs, const std::string& what,
                   const CategoryRegistry& registry =
                       CategoryRegistry::default_registry());

}  // namespace perceval::core
