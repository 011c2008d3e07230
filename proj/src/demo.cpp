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
#include "sddrt/demo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "sddrt/error.hpp"
#include "sddrt/model_io.hpp"
#include "sddrt/parallel.hpp"
#include "sddrt/rir_io.hpp"
#include "sddrt/room.hpp"
#include "sddrt/synth.hpp"

namespace sddrt {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kTrainStream = 11;
constexpr std::uint64_t kEvalStream = 23;
constexpr std::uint64_t kNoiseStream = 37;
constexpr std::uint64_t kRoomStream = 41;
constexpr int kBabbleTalker = 6;

std::uint64_t Mix(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer, so nearby seeds give unrelated streams.
  std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void Report(const DemoOptions& options, const std::string& message) {
  if (options.progress) options.progress(message);
}

std::string Indexed(const char* prefix, std::size_t i) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_%02zu.wav", prefix, i);
  return name;
}

}  // namespace

std::vector<AudioBuffer> DemoSpeech(std::uint64_t seed, int first_talker, int talkers,
                                    int utterances, double seconds, int sample_rate) {
  std::vector<AudioBuffer> out;
  for (int t = 0; t < talkers; ++t) {
    for (int u = 0; u < utterances; ++u) {
      out.push_back(SynthesizeSpeech(Mix(seed, 1000 * (first_talker + t) + u), seconds,
                                     sample_rate, first_talker + t));
    }
  }
  return out;
}

DemoResult RunDemo(const DemoOptions& options) {
  if (options.eval_t60s.empty() || options.snrs.empty()) {
    throw InvalidArgument("demo needs at least one T60 and one SNR");
  }
  const fs::path root = options.out_dir;
  for (const char* sub : {"speech", "noise", "rirs", "corpus", "models", "report"}) {
    fs::create_directories(root / sub);
  }
  DemoResult result;
  result.report_dir = root / "report";

  // Training: talkers disjoint from the evaluation talkers, noise-free.
  Report(options, "synthesizing training speech");
  const std::vector<AudioBuffer> train_speech =
      DemoSpeech(Mix(options.seed, kTrainStream), options.eval_talkers, options.train_talkers,
                 options.train_utterances, options.utterance_seconds, options.sample_rate);

  struct Profile {
    Variant variant;
    double t60_max;
  };
  const Profile profiles[] = {{Variant::kFullBand, 0.95},
                              {Variant::kMelBand, 0.95},
                              {Variant::kMelBand, 1.85}};
  for (const Profile& p : profiles) {
    const EstimatorConfig config = EstimatorConfig::Defaults(p.variant, options.sample_rate);
    TrainingOptions train;
    train.t60_grid = DefaultT60Grid(p.t60_max);
    train.rooms_per_t60 = options.rooms_per_t60;
    train.seed = Mix(options.seed, kRoomStream);
    train.jobs = options.jobs;
    const TrainingSet set = BuildTrainingSet(train_speech, train, config);
    FitResult fit = FitMapping(set.pairs, 2, MappingTarget::kLogT60, p.variant, p.t60_max);
    const std::string label = ModelLabel(fit.model);
    SaveModel({fit.model, config}, root / "models" / (label + ".json"));
    std::ofstream report(root / "models" / (label + ".report.json"));
    report << TrainingReportJson(set, fit, train).dump(2) << "\n";
    Report(options, "trained " + label + ": " + std::to_string(set.pairs.size()) +
                        " pairs, rms residual " + std::to_string(fit.report.rms_residual) + " s");
    result.models.push_back(std::move(fit));
  }

  // Evaluation assets: held-out talkers, one room per T60, two noise types.
  Report(options, "writing evaluation assets");
  const std::vector<AudioBuffer> eval_speech =
      DemoSpeech(Mix(options.seed, kEvalStream), 0, options.eval_talkers,
                 options.eval_utterances, options.utterance_seconds, options.sample_rate);
  for (std::size_t i = 0; i < eval_speech.size(); ++i) {
    SaveWav(eval_speech[i], root / "speech" / Indexed("utt", i));
  }

  std::uint64_t room_state = Mix(options.seed, kRoomStream + 1);
  std::vector<RoomSpec> rooms;
  for (double t60 : options.eval_t60s) {
    rooms.push_back(DrawRoom(room_state, RoomRanges{}, t60, options.sample_rate));
  }
  std::vector<std::optional<Rir>> slots(rooms.size());
  ParallelFor(rooms.size(), options.jobs, [&](std::size_t i) {
    Rir rir = ImageMethodRir(rooms[i]);
    double energy = 0.0;
    for (double v : rir.response.samples()) energy += v * v;
    rir.response = rir.response.Scaled(1.0 / std::sqrt(energy));
    slots[i] = std::move(rir);
  });
  std::vector<Rir> rirs;
  for (auto& r : slots) rirs.push_back(std::move(*r));
  for (std::size_t i = 0; i < rirs.size(); ++i) SaveRir(rirs[i], root / "rirs" / Indexed("rir", i));

  double max_rir = 0.0;
  for (const RoomSpec& r : rooms) max_rir = std::max(max_rir, r.rir_length);
  const double noise_seconds = options.utterance_seconds + max_rir + 1.0;
  const AudioBuffer babble_source = SynthesizeSpeech(
      Mix(options.seed, kNoiseStream + 1), noise_seconds, options.sample_rate, kBabbleTalker);
  SaveWav(SynthesizeColoredNoise(Mix(options.seed, kNoiseStream), noise_seconds,
                                 options.sample_rate)
              .Scaled(0.1),
          root / "noise" / "synthetic_white.wav");
  SaveWav(SynthesizeBabble(babble_source, Mix(options.seed, kNoiseStream + 2), noise_seconds)
              .Scaled(0.1),
          root / "noise" / "synthetic_babble.wav");

  std::vector<ManifestRow> manifest;
  for (std::size_t r = 0; r < rirs.size(); ++r) {
    for (std::size_t s = 0; s < eval_speech.size(); ++s) {
      for (NoiseType noise : {NoiseType::kSyntheticWhite, NoiseType::kSyntheticBabble}) {
        for (double snr : options.snrs) {
          ManifestRow row;
          row.speech = root / "speech" / Indexed("utt", s);
          row.rir = root / "rirs" / Indexed("rir", r);
          row.noise = root / "noise" / (std::string(NoiseTypeName(noise)) + ".wav");
          row.snr_db = snr;
          row.noise_type = noise;
          manifest.push_back(row);
        }
      }
    }
  }
  WriteManifest(manifest, root / "manifest.csv");

  Report(options, "building corpus of " + std::to_string(manifest.size()) + " items");
  result.corpus = BuildCorpus(root / "manifest.csv", root / "corpus");

  for (const FitResult& fit : result.models) {
    const EstimatorConfig config = EstimatorConfig::Defaults(fit.model.variant, options.sample_rate);
    EvalRun run = RunEval(result.corpus, fit.model, config);
    Report(options, "evaluated " + ModelLabel(fit.model) + ": " +
                        std::to_string(run.records.size()) + " records, " +
                        std::to_string(run.failures.size()) + " failures");
    for (EvalRecord& r : run.records) result.records.push_back(std::move(r));
    for (EvalFailure& f : run.failures) result.failures.push_back(std::move(f));
  }

  WriteRecordsCsv(result.records, result.report_dir / "records.csv");
  WriteEstimatesCsv(result.records, result.report_dir / "estimates.csv");
  result.rtf = RtfTable(result.records);
  WriteReport(BoxStatsByGroup(result.records), result.rtf, result.report_dir);
  return result;
}

}  // namespace sddrt
