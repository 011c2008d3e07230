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
#ifndef SDDRT_SYNTH_HPP_
#define SDDRT_SYNTH_HPP_

#include <cstdint>
#include <span>

#include "sddrt/audio.hpp"

namespace sddrt {

// Seeded stand-ins for the audio assets a real evaluation would use. None of
// these are speech; they only share its on/off structure and rough spectrum.

// Voiced and noisy bursts ("syllables") separated by pauses, with short
// offset ramps so that every burst ends in an endpoint decay. `talker`
// selects pitch range and spectral tilt. Active level is about -26 dB.
AudioBuffer SynthesizeSpeech(std::uint64_t seed, double duration, int sample_rate, int talker);

// Gaussian noise shaped to -6 dB/octave, unit RMS.
AudioBuffer SynthesizeColoredNoise(std::uint64_t seed, double duration, int sample_rate);

// Sum of eight copies of `speech` with random circular shifts and gains,
// unit RMS, `duration` long (the source is tiled as needed).
AudioBuffer SynthesizeBabble(const AudioBuffer& speech, std::uint64_t seed, double duration);

}  // namespace sddrt

#endif  // SDDRT_SYNTH_HPP_
