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
#ifndef SDDRT_ESTIMATOR_HPP_
#define SDDRT_ESTIMATOR_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sddrt/audio.hpp"
#include "sddrt/mel.hpp"
#include "sddrt/stft.hpp"

namespace sddrt {

// full_band works on every STFT bin with no bin selection. mel_band averages
// the bins into Mel bands and gates gradients on a per-band SNR estimate.
enum class Variant { kFullBand, kMelBand };

std::string_view VariantName(Variant variant);
Variant ParseVariant(std::string_view name);

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Per-band decay slopes over sliding windows of spectrogram frames.
struct GradientMatrix {
  Eigen::MatrixXd slopes;  // dB/s, bands x (frames - window_frames + 1)
  BoolMatrix selected;     // same shape as slopes
  int window_frames = 0;
};

// Negative-side variance of the selected decay slopes.
struct NsvStatistic {
  double value = 0.0;  // (dB/s)^2
  std::size_t n_negative = 0;
  std::size_t n_selected = 0;
};

enum class MappingTarget { kT60, kLogT60 };

std::string_view MappingTargetName(MappingTarget target);
MappingTarget ParseMappingTarget(std::string_view name);

// Polynomial in log10(NSV). With kLogT60 the polynomial gives log10(T60).
struct MappingModel {
  std::vector<double> coefficients;  // constant term first
  double t60_train_max = 0.95;
  Variant variant = Variant::kMelBand;
  MappingTarget target = MappingTarget::kT60;

  void Validate() const;
  double EvaluatePolynomial(double x) const;
};

struct EstimatorConfig {
  Variant variant = Variant::kMelBand;
  int sample_rate = 16000;
  StftConfig stft;
  int n_mel_bands = 23;
  int window_frames = 7;
  double snr_margin_db = 6.0;
  double min_duration = 1.0;  // seconds
  // Values more than this far below the spectrogram's peak are raised to
  // that level, so decays into digital silence end flat instead of in
  // rounding noise. Infinity disables the limit.
  double dynamic_range_db = 120.0;

  static EstimatorConfig Defaults(Variant variant, int sample_rate = 16000);
  void Validate() const;

  friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

// Raises every value to at least (peak - range_db), in place.
void LimitDynamicRange(BandSpectrogram& spectrogram, double range_db);

// Least-squares slope of every window_frames-long run of each band against
// frame time. The slope row of the Moore-Penrose inverse of the
// [1, t] design matrix is computed once and applied to all bands and
// windows. All entries start selected.
GradientMatrix DecayGradients(const BandSpectrogram& spectrogram, int window_frames);

// Row of pinv([1, t]) that yields the slope, for window_frames frames spaced
// frame_period apart.
Eigen::VectorXd SlopeFilter(int window_frames, double frame_period);

// SNR per band and frame against a noise floor taken as the 10th percentile
// of that band's values. Needs at least 10 frames.
Eigen::MatrixXd EstimateBandSnr(const BandSpectrogram& spectrogram);

// Keeps gradients whose window starts at a frame with SNR >= margin_db.
GradientMatrix SelectBins(GradientMatrix gradients, const Eigen::MatrixXd& snr,
                          double margin_db);

// Population variance of selected negative slopes. Throws EstimationError
// when fewer than two contribute.
NsvStatistic ComputeNsv(const GradientMatrix& gradients);

struct EstimateFlags {
  bool clamped = false;    // mapping went negative, reported 0 s
  bool saturated = false;  // NSV was zero, reported t60_train_max

  std::string ToString() const;
  friend bool operator==(const EstimateFlags&, const EstimateFlags&) = default;
};

struct MappedT60 {
  double t60 = 0.0;
  EstimateFlags flags;
};

MappedT60 MapNsvToT60(const NsvStatistic& nsv, const MappingModel& model);

struct T60Estimate {
  double t60 = 0.0;
  NsvStatistic nsv;
  EstimateFlags flags;
};

// Holds the per-config precomputation (filterbank). Stateless between calls
// and safe to share across threads.
class SddFrontEnd {
 public:
  explicit SddFrontEnd(EstimatorConfig config);

  const EstimatorConfig& config() const { return config_; }

  // Spectrogram as seen by the gradient stage (linear bins or Mel bands).
  BandSpectrogram Spectrogram(const AudioBuffer& audio) const;
  GradientMatrix Gradients(const AudioBuffer& audio) const;
  NsvStatistic MeasureNsv(const AudioBuffer& audio) const;

 private:
  void CheckAudio(const AudioBuffer& audio) const;

  EstimatorConfig config_;
  MelFilterbank filterbank_;
};

class T60Estimator {
 public:
  // Throws InvalidArgument when the model's variant differs from config's.
  T60Estimator(MappingModel model, EstimatorConfig config);

  T60Estimate Estimate(const AudioBuffer& audio) const;

  const MappingModel& model() const { return model_; }
  const EstimatorConfig& config() const { return front_end_.config(); }

 private:
  MappingModel model_;
  SddFrontEnd front_end_;
};

T60Estimate EstimateT60(const AudioBuffer& audio, const MappingModel& model,
                        const EstimatorConfig& config);

}  // namespace sddrt

#endif  // SDDRT_ESTIMATOR_HPP_
