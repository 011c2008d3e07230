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
#include "sddrt/level.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sddrt/error.hpp"

namespace sddrt {

double RmsLevelDb(std::span<const double> samples) {
  if (samples.empty()) return -std::numeric_limits<double>::infinity();
  double energy = 0.0;
  for (double s : samples) energy += s * s;
  return 10.0 * std::log10(energy / static_cast<double>(samples.size()));
}

double ActiveSpeechLevel(const AudioBuffer& buffer) {
  const auto samples = buffer.samples();
  const std::size_t frame =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::lround(kActivityFrameSeconds * buffer.sample_rate())));
  const std::size_t n_frames = std::max<std::size_t>(1, samples.size() / frame);

  std::vector<double> frame_energy(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t len = (n_frames == 1) ? samples.size() : frame;
    double e = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
      const double s = samples[f * frame + n];
      e += s * s;
    }
    frame_energy[f] = e / static_cast<double>(len);
  }
  const double peak = *std::max_element(frame_energy.begin(), frame_energy.end());
  if (!(peak > 0.0)) throw InvalidArgument("no active frames: signal is silent");

  const double threshold = peak * std::pow(10.0, -kActivityThresholdDb / 10.0);
  double sum = 0.0;
  std::size_t count = 0;
  for (double e : frame_energy) {
    if (e > threshold) {
      sum += e;
      ++count;
    }
  }
  return 10.0 * std::log10(sum / static_cast<double>(count));
}

double NoiseGainForSnr(const AudioBuffer& speech, const AudioBuffer& noise, double snr_db) {
  if (speech.sample_rate() != noise.sample_rate()) {
    throw InvalidArgument("sample rate mismatch: speech " + std::to_string(speech.sample_rate()) +
                          " Hz, noise " + std::to_string(noise.sample_rate()) + " Hz");
  }
  if (noise.size() < speech.size()) {
    throw InvalidArgument("noise too short: " + std::to_string(noise.size()) + " < " +
                          std::to_string(speech.size()) + " samples");
  }
  if (std::isnan(snr_db)) throw InvalidArgument("SNR is NaN");
  if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
  const double noise_level = RmsLevelDb(noise.samples().first(speech.size()));
  if (!std::isfinite(noise_level)) throw InvalidArgument("noise is silent over the speech span");
  const double speech_level = ActiveSpeechLevel(speech);
  return std::pow(10.0, (speech_level - snr_db - noise_level) / 20.0);
}

AudioBuffer MixAtSnr(const AudioBuffer& speech, const AudioBuffer& noise, double snr_db) {
  const double gain = NoiseGainForSnr(speech, noise, snr_db);
  std::vector<double> out(speech.samples().begin(), speech.samples().end());
  if (gain != 0.0) {
    const auto n = noise.samples();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += gain * n[i];
  }
  return AudioBuffer(std::move(out), speech.sample_rate());
}

}  // namespace sddrt
