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
#include "sddrt/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sddrt/error.hpp"

namespace sddrt {

std::string_view VariantName(Variant variant) {
  return variant == Variant::kFullBand ? "full_band" : "mel_band";
}

Variant ParseVariant(std::string_view name) {
  if (name == "full_band") return Variant::kFullBand;
  if (name == "mel_band") return Variant::kMelBand;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

std::string_view MappingTargetName(MappingTarget target) {
  return target == MappingTarget::kT60 ? "t60" : "log_t60";
}

MappingTarget ParseMappingTarget(std::string_view name) {
  if (name == "t60") return MappingTarget::kT60;
  if (name == "log_t60") return MappingTarget::kLogT60;
  throw InvalidArgument("unknown mapping target '" + std::string(name) + "'");
}

void MappingModel::Validate() const {
  if (coefficients.empty()) throw InvalidArgument("mapping model has no coefficients");
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw InvalidArgument("mapping model has non-finite coefficients");
  }
  if (!(t60_train_max > 0.0) || !std::isfinite(t60_train_max)) {
    throw InvalidArgument("t60_train_max must be positive");
  }
}

double MappingModel::EvaluatePolynomial(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

EstimatorConfig EstimatorConfig::Defaults(Variant variant, int sample_rate) {
  EstimatorConfig cfg;
  cfg.variant = variant;
  cfg.sample_rate = sample_rate;
  cfg.stft = StftConfig::ForSampleRate(sample_rate);
  return cfg;
}

void EstimatorConfig::Validate() const {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  stft.Validate();
  if (window_frames < 2) throw InvalidArgument("window_frames must be at least 2");
  if (variant == Variant::kMelBand && n_mel_bands < 2) {
    throw InvalidArgument("n_mel_bands must be at least 2");
  }
  if (std::isnan(snr_margin_db)) throw InvalidArgument("snr_margin is NaN");
  if (!(min_duration >= 0.0)) throw InvalidArgument("min_duration must be non-negative");
  if (!(dynamic_range_db > 0.0)) throw InvalidArgument("dynamic_range must be positive");
}

void LimitDynamicRange(BandSpectrogram& spectrogram, double range_db) {
  if (!std::isfinite(range_db) || spectrogram.values.size() == 0) return;
  const double floor = spectrogram.values.maxCoeff() - range_db;
  spectrogram.values = spectrogram.values.cwiseMax(floor);
}

Eigen::VectorXd SlopeFilter(int window_frames, double frame_period) {
  if (window_frames < 2) throw InvalidArgument("window_frames must be at least 2");
  if (!(frame_period > 0.0)) throw InvalidArgument("frame period must be positive");
  Eigen::MatrixXd design(window_frames, 2);
  for (int j = 0; j < window_frames; ++j) {
    design(j, 0) = 1.0;
    design(j, 1) = j * frame_period;
  }
  const Eigen::MatrixXd pinv = design.completeOrthogonalDecomposition().pseudoInverse();
  return pinv.row(1).transpose();
}

GradientMatrix DecayGradients(const BandSpectrogram& spectrogram, int window_frames) {
  if (window_frames < 2) throw InvalidArgument("window_frames must be at least 2");
  const Eigen::Index frames = spectrogram.num_frames();
  if (frames < window_frames) {
    throw InvalidArgument("spectrogram has " + std::to_string(frames) +
                          " frames, fewer than the gradient window (" +
                          std::to_string(window_frames) + ")");
  }
  const Eigen::VectorXd filter = SlopeFilter(window_frames, spectrogram.frame_period());
  const Eigen::Index out_frames = frames - window_frames + 1;

  // slopes = [windowed data] * filter, accumulated one window offset at a
  // time so every band and start frame is handled by the same column ops.
  // The filter weights sum to zero, so each window is taken relative to its
  // first frame: flat runs (silence raised to the range floor) then give a
  // slope of exactly zero instead of round-off of either sign, and a constant
  // dB offset cancels before it can perturb the sums.
  GradientMatrix g;
  g.window_frames = window_frames;
  const auto reference = spectrogram.values.leftCols(out_frames);
  g.slopes = Eigen::MatrixXd::Zero(spectrogram.num_bands(), out_frames);
  for (int j = 1; j < window_frames; ++j) {
    g.slopes.noalias() += filter(j) * (spectrogram.values.middleCols(j, out_frames) - reference);
  }
  g.selected = BoolMatrix::Constant(g.slopes.rows(), g.slopes.cols(), true);
  return g;
}

Eigen::MatrixXd EstimateBandSnr(const BandSpectrogram& spectrogram) {
  constexpr Eigen::Index kMinFrames = 10;
  constexpr double kFloorPercentile = 0.10;
  const Eigen::Index frames = spectrogram.num_frames();
  if (frames < kMinFrames) {
    throw InvalidArgument("band SNR estimation needs at least 10 frames, got " +
                          std::to_string(frames));
  }
  Eigen::MatrixXd snr(spectrogram.num_bands(), frames);
  std::vector<double> row(static_cast<std::size_t>(frames));
  const double position = kFloorPercentile * static_cast<double>(frames - 1);
  const auto lo = static_cast<std::ptrdiff_t>(std::floor(position));
  const double frac = position - static_cast<double>(lo);
  for (Eigen::Index b = 0; b < spectrogram.num_bands(); ++b) {
    for (Eigen::Index l = 0; l < frames; ++l) row[l] = spectrogram.values(b, l);
    std::nth_element(row.begin(), row.begin() + lo, row.end());
    const double low = row[lo];
    double floor = low;
    if (frac > 0.0) {
      const double high = *std::min_element(row.begin() + lo + 1, row.end());
      floor = low + frac * (high - low);
    }
    snr.row(b) = spectrogram.values.row(b).array() - floor;
  }
  return snr;
}

GradientMatrix SelectBins(GradientMatrix gradients, const Eigen::MatrixXd& snr,
                          double margin_db) {
  if (snr.rows() != gradients.slopes.rows() || snr.cols() < gradients.slopes.cols()) {
    throw InvalidArgument("SNR map shape does not cover the gradient matrix");
  }
  gradients.selected =
      gradients.selected && (snr.leftCols(gradients.slopes.cols()).array() >= margin_db);
  return gradients;
}

NsvStatistic ComputeNsv(const GradientMatrix& gradients) {
  if (gradients.selected.rows() != gradients.slopes.rows() ||
      gradients.selected.cols() != gradients.slopes.cols()) {
    throw InvalidArgument("selection mask shape differs from slope matrix");
  }
  NsvStatistic stat;
  double sum = 0.0;
  const Eigen::Index size = gradients.slopes.size();
  const double* slopes = gradients.slopes.data();
  const bool* selected = gradients.selected.data();
  for (Eigen::Index i = 0; i < size; ++i) {
    if (!selected[i]) continue;
    ++stat.n_selected;
    if (slopes[i] < 0.0) {
      ++stat.n_negative;
      sum += slopes[i];
    }
  }
  if (stat.n_negative < 2) {
    throw EstimationError("insufficient decay evidence: " + std::to_string(stat.n_negative) +
                          " negative gradients selected");
  }
  const double mean = sum / static_cast<double>(stat.n_negative);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    if (selected[i] && slopes[i] < 0.0) {
      const double d = slopes[i] - mean;
      ss += d * d;
    }
  }
  stat.value = ss / static_cast<double>(stat.n_negative);
  return stat;
}

std::string EstimateFlags::ToString() const {
  if (clamped && saturated) return "clamped+saturated";
  if (clamped) return "clamped";
  if (saturated) return "saturated";
  return "none";
}

MappedT60 MapNsvToT60(const NsvStatistic& nsv, const MappingModel& model) {
  model.Validate();
  if (!(nsv.value >= 0.0) || !std::isfinite(nsv.value)) {
    throw InvalidArgument("NSV must be finite and non-negative");
  }
  MappedT60 out;
  if (nsv.value == 0.0) {
    out.t60 = model.t60_train_max;
    out.flags.saturated = true;
    return out;
  }
  const double p = model.EvaluatePolynomial(std::log10(nsv.value));
  out.t60 = model.target == MappingTarget::kLogT60 ? std::pow(10.0, p) : p;
  if (out.t60 < 0.0) {
    out.t60 = 0.0;
    out.flags.clamped = true;
  }
  return out;
}

SddFrontEnd::SddFrontEnd(EstimatorConfig config) : config_(std::move(config)) {
  config_.Validate();
  if (config_.variant == Variant::kMelBand) {
    filterbank_ =
        BuildMelFilterbank(config_.stft.num_bins(), config_.n_mel_bands, config_.sample_rate);
  }
}

void SddFrontEnd::CheckAudio(const AudioBuffer& audio) const {
  if (audio.sample_rate() != config_.sample_rate) {
    throw InvalidArgument("audio is " + std::to_string(audio.sample_rate()) +
                          " Hz but the estimator is configured for " +
                          std::to_string(config_.sample_rate) + " Hz");
  }
  if (audio.duration() < config_.min_duration) {
    throw InvalidArgument("audio is shorter than the " + std::to_string(config_.min_duration) +
                          " s minimum");
  }
}

BandSpectrogram SddFrontEnd::Spectrogram(const AudioBuffer& audio) const {
  CheckAudio(audio);
  BandSpectrogram spec = config_.variant == Variant::kMelBand
                             ? MelLogSpectrogram(audio, config_.stft, filterbank_)
                             : StftLogMagnitude(audio, config_.stft);
  LimitDynamicRange(spec, config_.dynamic_range_db);
  return spec;
}

GradientMatrix SddFrontEnd::Gradients(const AudioBuffer& audio) const {
  const BandSpectrogram spec = Spectrogram(audio);
  GradientMatrix grads = DecayGradients(spec, config_.window_frames);
  if (config_.variant == Variant::kMelBand) {
    grads = SelectBins(std::move(grads), EstimateBandSnr(spec), config_.snr_margin_db);
  }
  return grads;
}

NsvStatistic SddFrontEnd::MeasureNsv(const AudioBuffer& audio) const {
  return ComputeNsv(Gradients(audio));
}

T60Estimator::T60Estimator(MappingModel model, EstimatorConfig config)
    : model_(std::move(model)), front_end_(std::move(config)) {
  model_.Validate();
  if (model_.variant != front_end_.config().variant) {
    throw InvalidArgument("variant mismatch: model is " + std::string(VariantName(model_.variant)) +
                          ", config is " + std::string(VariantName(front_end_.config().variant)));
  }
}

T60Estimate T60Estimator::Estimate(const AudioBuffer& audio) const {
  T60Estimate out;
  out.nsv = front_end_.MeasureNsv(audio);
  const MappedT60 mapped = MapNsvToT60(out.nsv, model_);
  out.t60 = mapped.t60;
  out.flags = mapped.flags;
  return out;
}

T60Estimate EstimateT60(const AudioBuffer& audio, const MappingModel& model,
                        const EstimatorConfig& config) {
  return T60Estimator(model, config).Estimate(audio);
}

}  // namespace sddrt
