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
#ifndef SDDRT_MEL_HPP_
#define SDDRT_MEL_HPP_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sddrt/audio.hpp"
#include "sddrt/stft.hpp"

namespace sddrt {

// mel(f) = 2595 log10(1 + f / 700)
double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters with centers equally spaced on the Mel scale between
// 0 Hz and Nyquist. Each row is normalized to sum to one so that banding is
// a weighted average rather than a sum.
struct MelFilterbank {
  Eigen::MatrixXd weights;                       // bands x fft bins
  std::vector<double> band_centers;              // Hz
  std::vector<std::pair<int, int>> support;      // [first, last] nonzero bin per band

  int num_bands() const { return static_cast<int>(weights.rows()); }
  int num_bins() const { return static_cast<int>(weights.cols()); }
};

MelFilterbank BuildMelFilterbank(int n_fft_bins, int n_bands, int sample_rate);

// Averages a linear-bin spectrogram into Mel bands. The average is taken
// over linear power (10^(dB/10)) and converted back to dB.
BandSpectrogram ApplyMel(const BandSpectrogram& spectrogram, const MelFilterbank& filterbank);

// Same result as ApplyMel(StftLogMagnitude(buffer, cfg), filterbank) but
// bands the floored power directly, skipping the dB round trip per bin.
BandSpectrogram MelLogSpectrogram(const AudioBuffer& buffer, const StftConfig& cfg,
                                  const MelFilterbank& filterbank);

}  // namespace sddrt

#endif  // SDDRT_MEL_HPP_
