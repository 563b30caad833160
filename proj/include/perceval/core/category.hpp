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

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace perceval::core {

// Closed set of admissible category names. The default registry carries the
// 26 annotated classes of the Argoverse 2 sensor dataset.
class CategoryRegistry {
 public:
  CategoryRegistry();
  explicit CategoryRegistry(std::vector<std::string> names);

  static const CategoryRegistry& default_registry();

  bool contains(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_set<std::string> lookup_;
};

}  // namespace perceval::core
