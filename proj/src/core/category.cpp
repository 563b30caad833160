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

#include "perceval/core/category.hpp"

namespace perceval::core {

namespace {

std::vector<std::string> av2_categories() {
  return {"REGULAR_VEHICLE",
          "PEDESTRIAN",
          "BICYCLIST",
          "MOTORCYCLIST",
          "WHEELED_RIDER",
          "BOLLARD",
          "CONSTRUCTION_CONE",
          "SIGN",
          "CONSTRUCTION_BARREL",
          "STOP_SIGN",
          "MOBILE_PEDESTRIAN_CROSSING_SIGN",
          "LARGE_VEHICLE",
          "BUS",
          "BOX_TRUCK",
          "TRUCK",
          "VEHICULAR_TRAILER",
          "TRUCK_CAB",
          "SCHOOL_BUS",
          "ARTICULATED_BUS",
          "MESSAGE_BOARD_TRAILER",
          "BICYCLE",
          "MOTORCYCLE",
          "WHEELED_DEVICE",
          "WHEELCHAIR",
          "STROLLER",
          "DOG"};
}

}  // namespace

CategoryRegistry::CategoryRegistry() : CategoryRegistry(av2_categories()) {}

CategoryRegistry::CategoryRegistry(std::vector<std::string> names)
    : names_(std::move(names)), lookup_(names_.begin(), names_.end()) {}

const CategoryRegistry& CategoryRegistry::default_registry() {
  static const CategoryRegistry registry;
  return registry;
}

bool CategoryRegistry::contains(std::string_view name) const {
  return lookup_.contains(std::string(name));
}

}  // namespace perceval::core
