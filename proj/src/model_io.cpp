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
#include "sddrt/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "sddrt/error.hpp"

namespace sddrt {
namespace {

std::string_view WindowName(WindowType type) {
  switch (type) {
    case WindowType::kHann:
      return "hann";
    case WindowType::kHamming:
      return "hamming";
    case WindowType::kRectangular:
      return "rectangular";
  }
  return "hamming";
}

WindowType ParseWindow(const std::string& name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "hamming") return WindowType::kHamming;
  if (name == "rectangular") return WindowType::kRectangular;
  throw InvalidArgument("unknown window '" + name + "'");
}

}  // namespace

nlohmann::json StftConfigToJson(const StftConfig& cfg) {
  return {{"frame_len", cfg.frame_len},
          {"hop", cfg.hop},
          {"window", WindowName(cfg.window)},
          {"fft_len", cfg.fft_len}};
}

StftConfig StftConfigFromJson(const nlohmann::json& doc) {
  StftConfig cfg;
  cfg.frame_len = doc.at("frame_len").get<int>();
  cfg.hop = doc.at("hop").get<int>();
  cfg.window = ParseWindow(doc.at("window").get<std::string>());
  cfg.fft_len = doc.at("fft_len").get<int>();
  cfg.Validate();
  return cfg;
}

nlohmann::json ModelToJson(const TrainedModel& model) {
  const EstimatorConfig& cfg = model.config;
  return {{"variant", VariantName(model.mapping.variant)},
          {"coefficients", model.mapping.coefficients},
          {"t60_train_max", model.mapping.t60_train_max},
          {"target", MappingTargetName(model.mapping.target)},
          {"sample_rate", cfg.sample_rate},
          {"stft", StftConfigToJson(cfg.stft)},
          {"n_mel_bands", cfg.n_mel_bands},
          {"window_frames", cfg.window_frames},
          {"snr_margin", cfg.snr_margin_db},
          {"min_duration", cfg.min_duration},
          {"dynamic_range", std::isfinite(cfg.dynamic_range_db)
                                ? nlohmann::json(cfg.dynamic_range_db)
                                : nlohmann::json(nullptr)}};
}

TrainedModel ModelFromJson(const nlohmann::json& doc) {
  try {
    TrainedModel model;
    model.mapping.variant = ParseVariant(doc.at("variant").get<std::string>());
    model.mapping.coefficients = doc.at("coefficients").get<std::vector<double>>();
    model.mapping.t60_train_max = doc.at("t60_train_max").get<double>();
    model.mapping.target = ParseMappingTarget(doc.value("target", std::string("t60")));
    model.mapping.Validate();

    EstimatorConfig& cfg = model.config;
    cfg.variant = model.mapping.variant;
    cfg.sample_rate = doc.at("sample_rate").get<int>();
    cfg.stft = StftConfigFromJson(doc.at("stft"));
    cfg.n_mel_bands = doc.at("n_mel_bands").get<int>();
    cfg.window_frames = doc.at("window_frames").get<int>();
    cfg.snr_margin_db = doc.at("snr_margin").get<double>();
    cfg.min_duration = doc.value("min_duration", 1.0);
    if (!doc.contains("dynamic_range")) {
      cfg.dynamic_range_db = 120.0;
    } else if (doc.at("dynamic_range").is_null()) {
      cfg.dynamic_range_db = std::numeric_limits<double>::infinity();
    } else {
      cfg.dynamic_range_db = doc.at("dynamic_range").get<double>();
    }
    cfg.Validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model document: ") + e.what());
  }
}

void SaveModel(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write model " + path.string());
  out << ModelToJson(model).dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

TrainedModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return ModelFromJson(doc);
}

}  // namespace sddrt
