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
#ifndef SDDRT_AUDIO_HPP_
#define SDDRT_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace sddrt {

// Mono sampled signal. Plays the role of anechoic speech, impulse response,
// noise or the noisy reverberant observation depending on context.
class AudioBuffer {
 public:
  // Throws InvalidArgument when the rate is not positive, the buffer is
  // empty or any sample is non-finite.
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  AudioBuffer Scaled(double gain) const;

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

enum class WavFormat { kPcm16, kFloat32 };

// Reads RIFF/WAVE PCM16 or IEEE float32/64. Only channel 0 of a
// multichannel file is kept (with a warning). int16 is divided by 32768.
AudioBuffer LoadWav(const std::filesystem::path& path);

// Writes a mono file. PCM16 output clips samples outside [-1, 1] and warns.
void SaveWav(const AudioBuffer& buffer, const std::filesystem::path& path,
             WavFormat format = WavFormat::kPcm16);

}  // namespace sddrt

#endif  // SDDRT_AUDIO_HPP_
