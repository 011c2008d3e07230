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
#include "sddrt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sddrt/error.hpp"
#include "sddrt/level.hpp"

namespace sddrt {
namespace {

constexpr double kTargetActiveLevelDb = -26.0;

struct TalkerProfile {
  double f0_lo;
  double f0_hi;
  double tilt;  // one-pole lowpass coefficient
};

TalkerProfile ProfileFor(int talker) {
  switch (talker) {
    case 0:
      return {95.0, 140.0, 0.90};
    case 1:
      return {180.0, 250.0, 0.85};
    default: {
      const double base = 100.0 + 37.0 * (talker % 5);
      return {base, base * 1.4, 0.80 + 0.02 * (talker % 6)};
    }
  }
}

// Two-pole resonator, unity gain at DC-ish scale.
class Resonator {
 public:
  Resonator(double freq, double bandwidth, int sample_rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth / sample_rate);
    a1_ = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / sample_rate);
    a2_ = -r * r;
    gain_ = 1.0 - r;
  }
  double Process(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_, a2_, gain_;
  double y1_ = 0.0, y2_ = 0.0;
};

void RaisedCosineEnvelope(std::span<double> burst, std::size_t attack, std::size_t release) {
  const std::size_t n = burst.size();
  attack = std::min(attack, n / 2);
  release = std::min(release, n / 2);
  for (std::size_t i = 0; i < attack; ++i) {
    burst[i] *= 0.5 - 0.5 * std::cos(std::numbers::pi * (i + 0.5) / attack);
  }
  for (std::size_t i = 0; i < release; ++i) {
    burst[n - 1 - i] *= 0.5 - 0.5 * std::cos(std::numbers::pi * (i + 0.5) / release);
  }
}

AudioBuffer NormalizeRms(std::vector<double> samples, int sample_rate) {
  double energy = 0.0;
  for (double s : samples) energy += s * s;
  const double rms = std::sqrt(energy / static_cast<double>(samples.size()));
  if (!(rms > 0.0)) throw InvalidArgument("cannot normalize a silent signal");
  for (double& s : samples) s /= rms;
  return AudioBuffer(std::move(samples), sample_rate);
}

}  // namespace

AudioBuffer SynthesizeSpeech(std::uint64_t seed, double duration, int sample_rate, int talker) {
  if (!(duration >= 0.5)) throw InvalidArgument("synthetic speech needs at least 0.5 s");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const TalkerProfile profile = ProfileFor(talker);
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(talker) + 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

  const auto total = static_cast<std::size_t>(std::lround(duration * sample_rate));
  std::vector<double> out(total, 0.0);
  auto pos = static_cast<std::size_t>(0.15 * sample_rate);
  const auto stop = total - static_cast<std::size_t>(0.20 * sample_rate);

  while (pos < stop) {
    const auto len = std::min<std::size_t>(
        static_cast<std::size_t>(uniform(0.08, 0.30) * sample_rate), stop - pos);
    const bool voiced = uni(rng) < 0.8;
    const double f0_start = uniform(profile.f0_lo, profile.f0_hi);
    const double f0_end = f0_start * uniform(0.9, 1.1);
    Resonator f1(uniform(300.0, 900.0), 90.0, sample_rate);
    Resonator f2(uniform(900.0, 2500.0), 120.0, sample_rate);
    const double amplitude = uniform(0.5, 1.0);

    std::vector<double> burst(len);
    double phase = uni(rng);
    double tilt_state = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      double excitation = 0.0;
      if (voiced) {
        const double f0 = f0_start + (f0_end - f0_start) * static_cast<double>(i) / len;
        phase += f0 / sample_rate;
        if (phase >= 1.0) {
          phase -= 1.0;
          excitation = 1.0;
        }
        excitation += 0.05 * gauss(rng);
      } else {
        excitation = 0.3 * gauss(rng);
      }
      const double shaped = f2.Process(f1.Process(excitation)) + 0.02 * excitation;
      tilt_state = profile.tilt * tilt_state + (1.0 - profile.tilt) * shaped;
      burst[i] = amplitude * (shaped + 4.0 * tilt_state);
    }
    RaisedCosineEnvelope(burst, static_cast<std::size_t>(0.010 * sample_rate),
                         static_cast<std::size_t>(0.005 * sample_rate));
    std::copy(burst.begin(), burst.end(), out.begin() + static_cast<std::ptrdiff_t>(pos));

    const double pause = uni(rng) < 0.25 ? uniform(0.25, 0.50) : uniform(0.06, 0.18);
    pos += len + static_cast<std::size_t>(pause * sample_rate);
  }

  AudioBuffer raw(std::move(out), sample_rate);
  const double gain = std::pow(10.0, (kTargetActiveLevelDb - ActiveSpeechLevel(raw)) / 20.0);
  return raw.Scaled(gain);
}

AudioBuffer SynthesizeColoredNoise(std::uint64_t seed, double duration, int sample_rate) {
  if (!(duration > 0.0)) throw InvalidArgument("noise duration must be positive");
  std::mt19937_64 rng(seed ^ 0xC2B2AE3D27D4EB4FULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto total = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(duration * sample_rate)));
  std::vector<double> out(total);
  // Leaky integrator: -6 dB/octave above a corner near 25 Hz at 16 kHz.
  double state = 0.0;
  for (double& s : out) {
    state = 0.99 * state + gauss(rng);
    s = state;
  }
  return NormalizeRms(std::move(out), sample_rate);
}

AudioBuffer SynthesizeBabble(const AudioBuffer& speech, std::uint64_t seed, double duration) {
  constexpr int kTalkers = 8;
  if (!(duration > 0.0)) throw InvalidArgument("babble duration must be positive");
  std::mt19937_64 rng(seed ^ 0x165667B19E3779F9ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto total = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(duration * speech.sample_rate())));
  const auto src = speech.samples();
  std::vector<double> out(total, 0.0);
  for (int t = 0; t < kTalkers; ++t) {
    const auto shift = static_cast<std::size_t>(uni(rng) * static_cast<double>(src.size()));
    const double gain = std::pow(10.0, -uni(rng) * 6.0 / 20.0);
    for (std::size_t i = 0; i < total; ++i) out[i] += gain * src[(i + shift) % src.size()];
  }
  return NormalizeRms(std::move(out), speech.sample_rate());
}

}  // namespace sddrt
