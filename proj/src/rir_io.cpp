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
#include "sddrt/rir_io.hpp"

#include <fstream>
#include <string>

#include "sddrt/error.hpp"

namespace sddrt {

nlohmann::json RoomSpecToJson(const RoomSpec& spec) {
  nlohmann::json doc = {
      {"dims", spec.dims},
      {"source", spec.source},
      {"mic", spec.mic},
      {"target_t60", spec.target_t60},
      {"sample_rate", spec.sample_rate},
      {"rir_length", spec.rir_length},
      {"max_image_order", spec.ImageOrder()},
      {"absorption_model",
       spec.absorption_model == AbsorptionModel::kSabine ? "sabine" : "image_source"},
      {"absorption", spec.Absorption()},
      {"highpass_hz", spec.highpass_hz},
      {"speed_of_sound", kSpeedOfSound}};
  return doc;
}

RoomSpec RoomSpecFromJson(const nlohmann::json& doc) {
  try {
    RoomSpec spec;
    spec.dims = doc.at("dims").get<Vec3>();
    spec.source = doc.at("source").get<Vec3>();
    spec.mic = doc.at("mic").get<Vec3>();
    spec.target_t60 = doc.at("target_t60").get<double>();
    spec.sample_rate = doc.at("sample_rate").get<int>();
    spec.rir_length = doc.at("rir_length").get<double>();
    spec.max_image_order = doc.value("max_image_order", 0);
    spec.absorption_model = doc.value("absorption_model", std::string("image_source")) == "sabine"
                                ? AbsorptionModel::kSabine
                                : AbsorptionModel::kImageSource;
    if (doc.contains("absorption")) spec.absorption = doc.at("absorption").get<double>();
    spec.highpass_hz = doc.value("highpass_hz", 50.0);
    spec.Validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed room document: ") + e.what());
  }
}

std::filesystem::path RirSidecarPath(const std::filesystem::path& wav_path) {
  std::filesystem::path p = wav_path;
  p.replace_extension(".json");
  return p;
}

std::optional<double> SaveRir(const Rir& rir, const std::filesystem::path& wav_path) {
  SaveWav(rir.response, wav_path, WavFormat::kFloat32);
  std::optional<double> t60;
  try {
    t60 = MeasureT60(rir.response);
  } catch (const EstimationError&) {
  }
  nlohmann::json doc = {{"sample_rate", rir.response.sample_rate()},
                        {"length_samples", rir.response.size()},
                        {"t60_fit", "T30 (-5 to -35 dB)"},
                        {"order_truncated", rir.order_truncated}};
  doc["measured_t60"] = t60 ? nlohmann::json(*t60) : nlohmann::json(nullptr);
  doc["room"] = rir.room ? RoomSpecToJson(*rir.room) : nlohmann::json("measured");

  const auto sidecar = RirSidecarPath(wav_path);
  std::ofstream out(sidecar, std::ios::trunc);
  if (!out) throw IoError("cannot write " + sidecar.string());
  out << doc.dump(2) << "\n";
  return t60;
}

std::optional<double> ReadSidecarT60(const std::filesystem::path& wav_path) {
  const auto sidecar = RirSidecarPath(wav_path);
  std::ifstream in(sidecar);
  if (!in) return std::nullopt;
  try {
    nlohmann::json doc;
    in >> doc;
    if (doc.contains("measured_t60") && doc["measured_t60"].is_number()) {
      return doc["measured_t60"].get<double>();
    }
  } catch (const nlohmann::json::exception&) {
    throw IoError(sidecar.string() + ": malformed sidecar");
  }
  return std::nullopt;
}

}  // namespace sddrt
