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
#ifndef SDDRT_STFT_HPP_
#define SDDRT_STFT_HPP_

#include <vector>

#include <Eigen/Dense>

#include "sddrt/audio.hpp"

namespace sddrt {

enum class WindowType { kHann, kHamming, kRectangular };

struct StftConfig {
  int frame_len = 512;
  int hop = 256;
  WindowType window = WindowType::kHamming;
  int fft_len = 512;

  // 32 ms frames, 16 ms hop, Hamming, FFT length the next power of two.
  static StftConfig ForSampleRate(int sample_rate);

  // Throws InvalidArgument unless 0 < hop <= frame_len <= fft_len.
  void Validate() const;

  int num_bins() const { return fft_len / 2 + 1; }

  friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

// Magnitude floor applied before taking logs (-200 dB).
inline constexpr double kMagnitudeFloor = 1e-10;

enum class BandMode { kLinearBins, kMelBands };

// Log-magnitude time-frequency matrix, bands x frames, in dB.
struct BandSpectrogram {
  Eigen::MatrixXd values;
  std::vector<double> band_centers;  // Hz, strictly increasing
  std::vector<double> frame_times;   // seconds, uniform at hop / sample_rate
  BandMode mode = BandMode::kLinearBins;

  Eigen::Index num_bands() const { return values.rows(); }
  Eigen::Index num_frames() const { return values.cols(); }
  double frame_period() const;
};

std::vector<double> MakeWindow(WindowType type, int length);

// Number of full frames; the trailing partial frame is dropped.
int NumFrames(std::size_t signal_len, const StftConfig& cfg);

// Complex one-sided STFT, (fft_len/2 + 1) x frames. Frames are
// zero-padded to fft_len after windowing.
Eigen::MatrixXcd StftComplex(const AudioBuffer& buffer, const StftConfig& cfg);

// values[k, l] = 20 log10(|X(k, l)| + kMagnitudeFloor).
BandSpectrogram StftLogMagnitude(const AudioBuffer& buffer, const StftConfig& cfg);

}  // namespace sddrt

#endif  // SDDRT_STFT_HPP_
