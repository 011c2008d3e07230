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
#ifndef SDDRT_LEVEL_HPP_
#define SDDRT_LEVEL_HPP_

#include <span>

#include "sddrt/audio.hpp"

namespace sddrt {

// Frames quieter than the loudest frame by more than this are inactive.
inline constexpr double kActivityThresholdDb = 35.0;
inline constexpr double kActivityFrameSeconds = 0.010;

// Mean-square level in dB relative to full scale over all samples.
// Returns -infinity for an all-zero span.
double RmsLevelDb(std::span<const double> samples);

// Level of the active portion of the signal in dB re full scale. A 10 ms
// frame is active when its RMS is within 35 dB of the loudest frame.
// Simplified energy VAD, not the full P.56 envelope method.
// Throws InvalidArgument when no frame is active.
double ActiveSpeechLevel(const AudioBuffer& buffer);

// speech + g * noise[0, len(speech)), with g chosen so that
// ActiveSpeechLevel(speech) - RmsLevelDb(g * noise) == snr_db.
// An infinite snr_db returns the speech unchanged.
AudioBuffer MixAtSnr(const AudioBuffer& speech, const AudioBuffer& noise, double snr_db);

// The noise gain MixAtSnr applies.
double NoiseGainForSnr(const AudioBuffer& speech, const AudioBuffer& noise, double snr_db);

}  // namespace sddrt

#endif  // SDDRT_LEVEL_HPP_
