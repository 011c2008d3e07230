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
#ifndef SDDRT_EVAL_HPP_
#define SDDRT_EVAL_HPP_

#include <compare>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sddrt/estimator.hpp"

namespace sddrt {

enum class NoiseType { kAmbient, kFan, kBabble, kSyntheticWhite, kSyntheticBabble };

std::string_view NoiseTypeName(NoiseType type);
NoiseType ParseNoiseType(std::string_view name);

// SNR text as used in manifests and reports: a number, or "inf" / "clean"
// for no added noise.
double ParseSnr(std::string_view text);
std::string FormatSnr(double snr_db);

// One row of a corpus manifest, paths resolved against the manifest's
// directory.
struct ManifestRow {
  std::filesystem::path speech;
  std::filesystem::path rir;
  std::filesystem::path noise;
  double snr_db = 0.0;
  NoiseType noise_type = NoiseType::kAmbient;
};

// CSV with header speech,rir,noise,snr_db,noise_type (any column order).
std::vector<ManifestRow> ReadManifest(const std::filesystem::path& manifest);
void WriteManifest(std::span<const ManifestRow> rows, const std::filesystem::path& manifest);

struct CorpusItem {
  std::string item_id;
  std::filesystem::path speech_path;
  std::filesystem::path rir_path;
  std::filesystem::path noise_path;
  std::filesystem::path audio_path;  // noisy reverberant output
  double snr_db = 0.0;
  NoiseType noise_type = NoiseType::kAmbient;
  double t60_true = 0.0;
};

nlohmann::json CorpusItemToJson(const CorpusItem& item);
CorpusItem CorpusItemFromJson(const nlohmann::json& doc);

// Convolves speech with the RIR (full length), mixes noise at the row's SNR
// and writes <out_dir>/<item_id>.wav plus a JSON sidecar per item and a
// corpus.json index. Returned audio paths include out_dir. t60_true is measured from the RIR's energy decay; when
// the decay cannot be measured the RIR's sidecar (<rir>.json,
// "measured_t60") is used instead.
std::vector<CorpusItem> BuildCorpus(const std::filesystem::path& manifest,
                                    const std::filesystem::path& out_dir);

// Reads a corpus.json index. Relative audio paths resolve against its
// directory.
std::vector<CorpusItem> LoadCorpus(const std::filesystem::path& index);

// Ground-truth T60 for an RIR file: measured, else the sidecar value.
double RirT60(const std::filesystem::path& rir_path, const AudioBuffer& rir);

struct EvalRecord {
  std::string item_id;
  std::string variant;  // label of the model that produced it
  NoiseType noise_type = NoiseType::kAmbient;
  double snr_db = 0.0;
  double t60_true = 0.0;
  double t60_est = 0.0;
  double error = 0.0;  // t60_est - t60_true
  double nsv = 0.0;
  std::string flags;
  double cpu_time = 0.0;        // seconds, estimator only
  double audio_duration = 0.0;  // seconds
};

struct EvalFailure {
  std::string item_id;
  std::string message;
};

struct EvalRun {
  std::vector<EvalRecord> records;
  std::vector<EvalFailure> failures;
};

struct EvalOptions {
  std::string label;  // defaults to ModelLabel(model)
  int jobs = 1;
  // Times every item on one thread; the reference mode for RTF numbers.
  bool sequential_timing = true;
};

// "<variant>-<t60_train_max>", e.g. mel_band-0.95.
std::string ModelLabel(const MappingModel& model);

// Estimates every item. Only the estimator call is timed (thread CPU time);
// loading audio is not. Items that fail are reported, not thrown.
EvalRun RunEval(std::span<const CorpusItem> items, const MappingModel& model,
                const EstimatorConfig& config, const EvalOptions& options = {});

// Linear-interpolated percentile of sorted data, p in [0, 1].
double Percentile(std::span<const double> sorted, double p);

struct BoxStats {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_lo = 0.0;  // most extreme data within 1.5 IQR of the box
  double whisker_hi = 0.0;
  std::size_t n = 0;
  std::size_t n_outliers = 0;

  friend bool operator==(const BoxStats&, const BoxStats&) = default;
};

// Throws InvalidArgument on empty input.
BoxStats ComputeBoxStats(std::span<const double> values);

struct GroupBy {
  bool variant = true;
  bool noise_type = true;
  bool snr = true;
};

// Fields not grouped on are reported as "*".
struct GroupKey {
  std::string variant;
  std::string noise_type;
  double snr_db = 0.0;

  auto operator<=>(const GroupKey&) const = default;
};

using GroupedStats = std::map<GroupKey, BoxStats>;

// Box statistics of the estimation error per group.
GroupedStats BoxStatsByGroup(std::span<const EvalRecord> records, GroupBy group_by = {});

// Total CPU time over total audio duration.
double RealTimeFactor(std::span<const EvalRecord> records);

// Median of t60_est per group (used for noise-bias checks).
std::map<GroupKey, double> MedianEstimateByGroup(std::span<const EvalRecord> records,
                                                 GroupBy group_by = {});

void WriteRecordsCsv(std::span<const EvalRecord> records, const std::filesystem::path& path);
std::vector<EvalRecord> ReadRecordsCsv(const std::filesystem::path& path);

// Same as the records file without timing columns, so it is reproducible.
void WriteEstimatesCsv(std::span<const EvalRecord> records, const std::filesystem::path& path);

struct RtfRow {
  std::string variant;
  double rtf = 0.0;
  double cpu_time = 0.0;
  double audio_duration = 0.0;
  std::size_t n = 0;
};

std::vector<RtfRow> RtfTable(std::span<const EvalRecord> records);

// box_stats.csv (one row per group, full precision), boxplot.dat (one
// gnuplot block per noise type, variants along x grouped by SNR) and, when
// rtf rows are given, rtf.csv.
void WriteReport(const GroupedStats& stats, std::span<const RtfRow> rtfs,
                 const std::filesystem::path& out_dir);

GroupedStats ReadBoxStatsCsv(const std::filesystem::path& path);

// Fixed-width text table of RTFs, one row per variant.
std::string FormatRtfTable(std::span<const RtfRow> rows);

}  // namespace sddrt

#endif  // SDDRT_EVAL_HPP_
