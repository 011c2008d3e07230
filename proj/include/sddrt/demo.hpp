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
#ifndef SDDRT_DEMO_HPP_
#define SDDRT_DEMO_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sddrt/eval.hpp"
#include "sddrt/trainer.hpp"

namespace sddrt {

// Zero-asset run of the whole pipeline on synthetic speech: train the three
// model profiles, build a desk-scale noisy corpus, evaluate and report.
struct DemoOptions {
  std::filesystem::path out_dir = "demo_out";
  std::uint64_t seed = 1;
  int jobs = 1;
  int sample_rate = 16000;

  int train_talkers = 4;           // talkers 2.. are used for training
  int train_utterances = 2;        // per training talker
  int eval_talkers = 2;            // talkers 0 and 1
  int eval_utterances = 3;         // per evaluation talker
  double utterance_seconds = 4.0;
  std::vector<double> eval_t60s{0.3, 0.45, 0.6, 0.75, 0.9};
  std::vector<double> snrs{-1.0, 12.0, 18.0};
  int rooms_per_t60 = 3;

  std::function<void(const std::string&)> progress;  // stage messages
};

struct DemoResult {
  std::vector<FitResult> models;  // full_band-0.95, mel_band-0.95, mel_band-1.85
  std::vector<CorpusItem> corpus;
  std::vector<EvalRecord> records;
  std::vector<EvalFailure> failures;
  std::vector<RtfRow> rtf;
  std::filesystem::path report_dir;
};

// Writes speech/, noise/, rirs/, manifest.csv, corpus/, models/ and report/
// under out_dir. Everything except report/records.csv and report/rtf.csv
// (timings) is byte-identical for a given seed.
DemoResult RunDemo(const DemoOptions& options);

// The synthetic utterances the demo uses, exposed for tests.
std::vector<AudioBuffer> DemoSpeech(std::uint64_t seed, int first_talker, int talkers,
                                    int utterances, double seconds, int sample_rate);

}  // namespace sddrt

#endif  // SDDRT_DEMO_HPP_
