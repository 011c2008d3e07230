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
#include "sddrt/mel.hpp"

#include <cmath>
#include <string>

#include "sddrt/error.hpp"
#include "stft_internal.hpp"

namespace sddrt {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank BuildMelFilterbank(int n_fft_bins, int n_bands, int sample_rate) {
  if (n_bands < 2) throw InvalidArgument("need at least 2 Mel bands");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (n_fft_bins < n_bands) {
    throw InvalidArgument("n_bands (" + std::to_string(n_bands) + ") exceeds available bins (" +
                          std::to_string(n_fft_bins) + ")");
  }
  const double nyquist = 0.5 * sample_rate;
  const double bin_hz = nyquist / (n_fft_bins - 1);
  const double mel_max = HzToMel(nyquist);

  // n_bands + 2 edges; band b spans edges[b] .. edges[b + 2], peaking at edges[b + 1].
  std::vector<double> edges(static_cast<std::size_t>(n_bands) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_max * static_cast<double>(i) / (n_bands + 1));
  }

  MelFilterbank fb;
  fb.weights = Eigen::MatrixXd::Zero(n_bands, n_fft_bins);
  fb.band_centers.resize(static_cast<std::size_t>(n_bands));
  fb.support.resize(static_cast<std::size_t>(n_bands));
  for (int b = 0; b < n_bands; ++b) {
    const double left = edges[b];
    const double center = edges[b + 1];
    const double right = edges[b + 2];
    fb.band_centers[b] = center;
    for (int k = 0; k < n_fft_bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      fb.weights(b, k) = w;
    }
    // Narrow low bands can fall between bins: use the bin nearest the center.
    if (fb.weights.row(b).sum() <= 0.0) {
      const int nearest = static_cast<int>(std::lround(center / bin_hz));
      fb.weights(b, std::min(nearest, n_fft_bins - 1)) = 1.0;
    }
    fb.weights.row(b) /= fb.weights.row(b).sum();

    int first = 0;
    while (fb.weights(b, first) == 0.0) ++first;
    int last = n_fft_bins - 1;
    while (fb.weights(b, last) == 0.0) --last;
    fb.support[b] = {first, last};
  }
  return fb;
}

namespace {

BandSpectrogram MelSkeleton(const BandSpectrogram& linear, const MelFilterbank& fb) {
  BandSpectrogram out;
  out.mode = BandMode::kMelBands;
  out.band_centers = fb.band_centers;
  out.frame_times = linear.frame_times;
  out.values.resize(fb.num_bands(), linear.num_frames());
  return out;
}

// Weighted average of one column of linear power into Mel bands, in dB.
template <typename PowerColumn, typename OutColumn>
void BandColumn(const MelFilterbank& fb, const PowerColumn& power, OutColumn&& out) {
  for (int b = 0; b < fb.num_bands(); ++b) {
    const auto [first, last] = fb.support[b];
    double acc = 0.0;
    for (int k = first; k <= last; ++k) acc += fb.weights(b, k) * power(k);
    out(b) = 10.0 * std::log10(acc);
  }
}

}  // namespace

BandSpectrogram ApplyMel(const BandSpectrogram& spectrogram, const MelFilterbank& filterbank) {
  if (spectrogram.mode != BandMode::kLinearBins) {
    throw InvalidArgument("ApplyMel expects a linear-bin spectrogram");
  }
  if (spectrogram.num_bands() != filterbank.num_bins()) {
    throw InvalidArgument("spectrogram has " + std::to_string(spectrogram.num_bands()) +
                          " bins but filterbank expects " +
                          std::to_string(filterbank.num_bins()));
  }
  BandSpectrogram out = MelSkeleton(spectrogram, filterbank);
  Eigen::VectorXd power(spectrogram.num_bands());
  for (Eigen::Index l = 0; l < spectrogram.num_frames(); ++l) {
    power = (spectrogram.values.col(l).array() * (std::log(10.0) / 10.0)).exp();
    BandColumn(filterbank, power, out.values.col(l));
  }
  return out;
}

BandSpectrogram MelLogSpectrogram(const AudioBuffer& buffer, const StftConfig& cfg,
                                  const MelFilterbank& filterbank) {
  if (cfg.num_bins() != filterbank.num_bins()) {
    throw InvalidArgument("STFT yields " + std::to_string(cfg.num_bins()) +
                          " bins but filterbank expects " +
                          std::to_string(filterbank.num_bins()));
  }
  const Eigen::MatrixXcd stft = StftComplex(buffer, cfg);
  const BandSpectrogram linear = internal::EmptyLinearSpectrogram(
      buffer, cfg, 0, static_cast<int>(stft.cols()));
  BandSpectrogram out = MelSkeleton(linear, filterbank);
  Eigen::VectorXd power(stft.rows());
  for (Eigen::Index l = 0; l < stft.cols(); ++l) {
    power = (stft.col(l).array().abs() + kMagnitudeFloor).square();
    BandColumn(filterbank, power, out.values.col(l));
  }
  return out;
}

}  // namespace sddrt
