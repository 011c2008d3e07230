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
#include "sddrt/stft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "stft_internal.hpp"
#include "sddrt/error.hpp"

namespace sddrt {

StftConfig StftConfig::ForSampleRate(int sample_rate) {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  StftConfig cfg;
  cfg.frame_len = static_cast<int>(std::lround(0.032 * sample_rate));
  cfg.hop = static_cast<int>(std::lround(0.016 * sample_rate));
  cfg.window = WindowType::kHamming;
  cfg.fft_len = 1;
  while (cfg.fft_len < cfg.frame_len) cfg.fft_len *= 2;
  cfg.Validate();
  return cfg;
}

void StftConfig::Validate() const {
  if (!(hop > 0 && hop <= frame_len && frame_len <= fft_len)) {
    throw InvalidArgument("STFT config requires 0 < hop <= frame_len <= fft_len (hop=" +
                          std::to_string(hop) + ", frame_len=" + std::to_string(frame_len) +
                          ", fft_len=" + std::to_string(fft_len) + ")");
  }
}

double BandSpectrogram::frame_period() const {
  if (frame_times.size() < 2) return 0.0;
  return frame_times[1] - frame_times[0];
}

std::vector<double> MakeWindow(WindowType type, int length) {
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  // Periodic (DFT-even) windows.
  const double step = 2.0 * std::numbers::pi / length;
  for (int n = 0; n < length; ++n) {
    switch (type) {
      case WindowType::kHann:
        w[n] = 0.5 - 0.5 * std::cos(step * n);
        break;
      case WindowType::kHamming:
        w[n] = 0.54 - 0.46 * std::cos(step * n);
        break;
      case WindowType::kRectangular:
        break;
    }
  }
  return w;
}

int NumFrames(std::size_t signal_len, const StftConfig& cfg) {
  if (signal_len < static_cast<std::size_t>(cfg.frame_len)) return 0;
  return 1 + static_cast<int>((signal_len - cfg.frame_len) / cfg.hop);
}

Eigen::MatrixXcd StftComplex(const AudioBuffer& buffer, const StftConfig& cfg) {
  cfg.Validate();
  const int frames = NumFrames(buffer.size(), cfg);
  if (frames == 0) {
    throw InvalidArgument("signal of " + std::to_string(buffer.size()) +
                          " samples is shorter than one frame (" +
                          std::to_string(cfg.frame_len) + ")");
  }
  const std::vector<double> window = MakeWindow(cfg.window, cfg.frame_len);
  const internal::RealFft fft(cfg.fft_len);
  const auto samples = buffer.samples();

  Eigen::MatrixXcd out(cfg.num_bins(), frames);
  std::vector<double> frame(static_cast<std::size_t>(cfg.fft_len), 0.0);
  for (int l = 0; l < frames; ++l) {
    const std::size_t start = static_cast<std::size_t>(l) * cfg.hop;
    for (int n = 0; n < cfg.frame_len; ++n) frame[n] = samples[start + n] * window[n];
    fft.Forward(frame.data(), out.col(l).data());
  }
  return out;
}

namespace internal {

BandSpectrogram EmptyLinearSpectrogram(const AudioBuffer& buffer, const StftConfig& cfg,
                                       int bands, int frames) {
  BandSpectrogram spec;
  spec.values.resize(bands, frames);
  spec.mode = BandMode::kLinearBins;
  spec.band_centers.resize(static_cast<std::size_t>(bands));
  for (int k = 0; k < bands; ++k) {
    spec.band_centers[k] = static_cast<double>(k) * buffer.sample_rate() / cfg.fft_len;
  }
  spec.frame_times.resize(static_cast<std::size_t>(frames));
  for (int l = 0; l < frames; ++l) {
    spec.frame_times[l] =
        (static_cast<double>(l) * cfg.hop + 0.5 * cfg.frame_len) / buffer.sample_rate();
  }
  return spec;
}

}  // namespace internal

BandSpectrogram StftLogMagnitude(const AudioBuffer& buffer, const StftConfig& cfg) {
  const Eigen::MatrixXcd stft = StftComplex(buffer, cfg);
  BandSpectrogram spec = internal::EmptyLinearSpectrogram(
      buffer, cfg, static_cast<int>(stft.rows()), static_cast<int>(stft.cols()));
  spec.values = 20.0 * (stft.array().abs() + kMagnitudeFloor).log10();
  return spec;
}

}  // namespace sddrt
