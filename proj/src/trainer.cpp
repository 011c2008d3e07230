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
#include "sddrt/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/Dense>

#include "sddrt/error.hpp"
#include "sddrt/format.hpp"
#include "sddrt/parallel.hpp"

namespace sddrt {

RoomSpec DrawRoom(std::uint64_t& state_seed, const RoomRanges& ranges, double t60,
                  int sample_rate) {
  constexpr int kMaxDraws = 1000;
  std::mt19937_64 rng(state_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

  RoomSpec spec;
  spec.target_t60 = t60;
  spec.sample_rate = sample_rate;
  spec.rir_length = 1.5 * t60 + 0.2;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    for (int i = 0; i < 3; ++i) spec.dims[i] = uniform(ranges.min_dims[i], ranges.max_dims[i]);
    try {
      spec.absorption = spec.Absorption();
    } catch (const InvalidArgument&) {
      spec.absorption.reset();
      continue;
    }

    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      for (int i = 0; i < 3; ++i) {
        spec.source[i] = uniform(ranges.wall_margin, spec.dims[i] - ranges.wall_margin);
        spec.mic[i] = uniform(ranges.wall_margin, spec.dims[i] - ranges.wall_margin);
      }
      double d2 = 0.0;
      for (int i = 0; i < 3; ++i) d2 += (spec.source[i] - spec.mic[i]) * (spec.source[i] - spec.mic[i]);
      const double d = std::sqrt(d2);
      placed = d >= ranges.min_source_mic && d <= ranges.max_source_mic;
    }
    if (!placed) continue;
    state_seed = rng();
    spec.Validate();
    return spec;
  }
  throw InvalidArgument("no room in the configured ranges can reach T60 " + std::to_string(t60) +
                        " s");
}

std::vector<double> DefaultT60Grid(double t60_max) {
  if (!(t60_max > 0.1)) throw InvalidArgument("t60_max must exceed 0.1 s");
  std::vector<double> grid;
  for (int i = 1; i / 10.0 < t60_max - 1e-9; ++i) grid.push_back(i / 10.0);
  grid.push_back(t60_max);
  return grid;
}

TrainingSet BuildTrainingSet(std::span<const AudioBuffer> speech,
                             const TrainingOptions& options, const EstimatorConfig& config) {
  if (speech.empty()) throw InvalidArgument("no training speech");
  if (options.t60_grid.empty()) throw InvalidArgument("empty T60 grid");
  if (options.rooms_per_t60 < 1) throw InvalidArgument("rooms_per_t60 must be at least 1");
  for (const AudioBuffer& s : speech) {
    if (s.sample_rate() != config.sample_rate) {
      throw InvalidArgument("training speech must be " + std::to_string(config.sample_rate) +
                            " Hz");
    }
  }
  const SddFrontEnd front_end(config);

  // Rooms are drawn up front, in grid order, so results do not depend on
  // how the simulation work is scheduled.
  std::vector<RoomSpec> rooms;
  std::uint64_t state = options.seed;
  for (double t60 : options.t60_grid) {
    for (int r = 0; r < options.rooms_per_t60; ++r) {
      rooms.push_back(DrawRoom(state, options.rooms, t60, config.sample_rate));
    }
  }

  struct Slot {
    std::optional<TrainingPair> pair;
  };
  std::vector<Slot> slots(rooms.size() * speech.size());
  ParallelFor(rooms.size(), options.jobs, [&](std::size_t room_id) {
    const Rir rir = ImageMethodRir(rooms[room_id]);
    double t60_true = 0.0;
    try {
      t60_true = MeasureT60(rir.response);
    } catch (const EstimationError&) {
      return;
    }
    for (std::size_t u = 0; u < speech.size(); ++u) {
      const AudioBuffer reverberant = Convolve(speech[u], rir.response);
      try {
        const NsvStatistic nsv = front_end.MeasureNsv(reverberant);
        if (!(nsv.value > 0.0)) continue;
        slots[room_id * speech.size() + u].pair =
            TrainingPair{nsv.value, t60_true, rooms[room_id].target_t60,
                         static_cast<int>(room_id), static_cast<int>(u)};
      } catch (const EstimationError&) {
      }
    }
  });

  TrainingSet set;
  for (const Slot& slot : slots) {
    if (slot.pair) {
      set.pairs.push_back(*slot.pair);
    } else {
      ++set.skipped;
    }
  }
  return set;
}

std::vector<AudioBuffer> LoadSpeechDir(const std::filesystem::path& speech_dir) {
  if (!std::filesystem::is_directory(speech_dir)) {
    throw IoError("speech directory " + speech_dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(speech_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidArgument("no .wav files in " + speech_dir.string());
  std::vector<AudioBuffer> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(LoadWav(f));
  return out;
}

FitResult FitMapping(std::span<const TrainingPair> pairs, int order, MappingTarget target,
                     Variant variant, std::optional<double> nominal_t60_max) {
  if (order < 0) throw InvalidArgument("polynomial order must be non-negative");
  const auto n = static_cast<Eigen::Index>(pairs.size());
  const Eigen::Index terms = order + 1;
  if (n < 10 * terms) {
    throw InvalidArgument("need at least " + std::to_string(10 * terms) + " pairs for order " +
                          std::to_string(order) + ", got " + std::to_string(n));
  }
  Eigen::MatrixXd design(n, terms);
  Eigen::VectorXd y(n);
  double t60_max = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const TrainingPair& p = pairs[static_cast<std::size_t>(i)];
    if (!(p.nsv > 0.0) || !(p.t60_true > 0.0)) {
      throw InvalidArgument("training pairs need positive NSV and T60");
    }
    const double x = std::log10(p.nsv);
    double power = 1.0;
    for (Eigen::Index k = 0; k < terms; ++k) {
      design(i, k) = power;
      power *= x;
    }
    y(i) = target == MappingTarget::kLogT60 ? std::log10(p.t60_true) : p.t60_true;
    t60_max = std::max(t60_max, p.t60_true);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < terms) {
    throw InvalidArgument("rank-deficient design: NSV values do not span order " +
                          std::to_string(order));
  }
  const Eigen::VectorXd coef = qr.solve(y);

  FitResult result;
  result.model.coefficients.assign(coef.data(), coef.data() + coef.size());
  result.model.target = target;
  result.model.variant = variant;
  result.model.t60_train_max = nominal_t60_max.value_or(t60_max);
  result.model.Validate();

  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = design.row(i).dot(coef);
    const double predicted = target == MappingTarget::kLogT60 ? std::pow(10.0, p) : p;
    const double r = predicted - pairs[static_cast<std::size_t>(i)].t60_true;
    ss += r * r;
  }
  result.report.n_pairs = pairs.size();
  result.report.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return result;
}

nlohmann::json TrainingReportJson(const TrainingSet& set, const FitResult& fit,
                                  const TrainingOptions& options) {
  double t60_min = std::numeric_limits<double>::infinity();
  double t60_max = 0.0;
  for (const TrainingPair& p : set.pairs) {
    t60_min = std::min(t60_min, p.t60_true);
    t60_max = std::max(t60_max, p.t60_true);
  }
  return {{"n_pairs", fit.report.n_pairs},
          {"n_skipped", set.skipped},
          {"rms_residual", fit.report.rms_residual},
          {"coefficients", fit.model.coefficients},
          {"variant", VariantName(fit.model.variant)},
          {"target", MappingTargetName(fit.model.target)},
          {"t60_train_max", fit.model.t60_train_max},
          {"t60_grid", options.t60_grid},
          {"rooms_per_t60", options.rooms_per_t60},
          {"seed", options.seed},
          {"measured_t60_min", set.pairs.empty() ? 0.0 : t60_min},
          {"measured_t60_max", t60_max},
          {"t60_fit", "T30 (-5 to -35 dB)"}};
}

void WritePairsCsv(std::span<const TrainingPair> pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "nsv,t60_true,room_id,utt_id\n";
  for (const TrainingPair& p : pairs) {
    out << FormatDouble(p.nsv) << ',' << FormatDouble(p.t60_true) << ',' << p.room_id << ','
        << p.utterance_id << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sddrt
