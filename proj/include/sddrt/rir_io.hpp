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
#ifndef SDDRT_RIR_IO_HPP_
#define SDDRT_RIR_IO_HPP_

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "sddrt/room.hpp"

namespace sddrt {

nlohmann::json RoomSpecToJson(const RoomSpec& spec);
RoomSpec RoomSpecFromJson(const nlohmann::json& doc);

// Sidecar path for an RIR file: same stem, .json extension.
std::filesystem::path RirSidecarPath(const std::filesystem::path& wav_path);

// Writes the response as float32 WAV and a sidecar holding the room (when
// simulated) and the measured T60. Returns the measured T60, or nullopt
// when the decay cannot be measured.
std::optional<double> SaveRir(const Rir& rir, const std::filesystem::path& wav_path);

// measured_t60 from a sidecar, if the file exists and carries one.
std::optional<double> ReadSidecarT60(const std::filesystem::path& wav_path);

}  // namespace sddrt

#endif  // SDDRT_RIR_IO_HPP_
