/*
Copyright 2026 The sddrt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#ifndef SDDRT_MODEL_IO_HPP_
#define SDDRT_MODEL_IO_HPP_

#include <filesystem>

#include "json.hpp"

#include "sddrt/estimator.hpp"

namespace sddrt {

// A mapping is only meaningful with the front-end settings it was trained
// with, so both travel together in the model file.
struct TrainedModel {
  MappingModel mapping;
  EstimatorConfig config;
};

nlohmann::json ModelToJson(const TrainedModel& model);
TrainedModel ModelFromJson(const nlohmann::json& doc);

void SaveModel(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel LoadModel(const std::filesystem::path& path);

nlohmann::json StftConfigToJson(const StftConfig& cfg);
StftConfig StftConfigFromJson(const nlohmann::json& doc);

}  // namespace sddrt

#endif  // SDDRT_MODEL_IO_HPP_
