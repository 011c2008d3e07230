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
#ifndef SDDRT_TRAINER_HPP_
#define SDDRT_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sddrt/estimator.hpp"
#include "sddrt/room.hpp"

namespace sddrt {

struct TrainingPair {
  double nsv = 0.0;       // (dB/s)^2
  double t60_true = 0.0;  // Schroeder-measured, seconds
  double t60_target = 0.0;
  int room_id = 0;
  int utterance_id = 0;
};

// Ranges rooms and positions are drawn from. Rooms that cannot reach the
// requested T60 under the absorption model are redrawn.
struct RoomRanges {
  Vec3 min_dims{3.0, 3.0, 2.4};
  Vec3 max_dims{8.0, 6.0, 3.5};
  double wall_margin = 0.5;
  double min_source_mic = 1.0;
  double max_source_mic = 3.0;
};

// Draws a room for `t60` from `ranges` and fixes its absorption. The response
// is long enough for the Schroeder fit: 1.5 * t60 + 0.2 s.
RoomSpec DrawRoom(std::uint64_t& state_seed, const RoomRanges& ranges, double t60,
                  int sample_rate);

struct TrainingOptions {
  std::vector<double> t60_grid;
  int rooms_per_t60 = 3;
  RoomRanges rooms;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct TrainingSet {
  std::vector<TrainingPair> pairs;
  std::size_t skipped = 0;  // items with insufficient decay evidence
};

// T60 grid 0.1, 0.2, ... below t60_max, then t60_max itself.
std::vector<double> DefaultT60Grid(double t60_max);

// Simulates rooms on the grid, labels each with its measured T60, convolves
// every utterance and measures the NSV. No noise is added. Deterministic for
// a given seed regardless of `jobs`.
TrainingSet BuildTrainingSet(std::span<const AudioBuffer> speech,
                             const TrainingOptions& options, const EstimatorConfig& config);

// Loads every .wav in `speech_dir` in name order.
std::vector<AudioBuffer> LoadSpeechDir(const std::filesystem::path& speech_dir);

struct FitReport {
  double rms_residual = 0.0;  // seconds
  std::size_t n_pairs = 0;
};

struct FitResult {
  MappingModel model;
  FitReport report;
};

// Ordinary least squares of the target against powers of log10(nsv).
// t60_train_max is `nominal_t60_max` when given (a published profile),
// otherwise the largest measured T60 among the pairs.
FitResult FitMapping(std::span<const TrainingPair> pairs, int order, MappingTarget target,
                     Variant variant, std::optional<double> nominal_t60_max = std::nullopt);

nlohmann::json TrainingReportJson(const TrainingSet& set, const FitResult& fit,
                                  const TrainingOptions& options);
void WritePairsCsv(std::span<const TrainingPair> pairs, const std::filesystem::path& path);

}  // namespace sddrt

#endif  // SDDRT_TRAINER_HPP_
