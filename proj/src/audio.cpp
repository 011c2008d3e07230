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
#include "sddrt/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "sddrt/error.hpp"

namespace sddrt {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct WavFormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw InvalidArgument("sample rate must be positive, got " +
                          std::to_string(sample_rate_));
  }
  if (samples_.empty()) throw InvalidArgument("audio buffer is empty");
  for (double s : samples_) {
    if (!std::isfinite(s)) throw InvalidArgument("audio buffer has non-finite samples");
  }
}

AudioBuffer AudioBuffer::Scaled(double gain) const {
  std::vector<double> out(samples_);
  for (double& s : out) s *= gain;
  return AudioBuffer(std::move(out), sample_rate_);
}

AudioBuffer LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw IoError(path.string() + ": not a RIFF/WAVE file");
  }

  WavFormatChunk fmt;
  bool have_fmt = false;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint32_t chunk_size = ReadU32(data + pos + 4);
    const unsigned char* body = data + pos + 8;
    const std::size_t available = size - (pos + 8);
    if (std::memcmp(data + pos, "fmt ", 4) == 0) {
      if (chunk_size < 16 || available < 16) throw IoError(path.string() + ": truncated fmt chunk");
      fmt.format = ReadU16(body);
      fmt.channels = ReadU16(body + 2);
      fmt.sample_rate = ReadU32(body + 4);
      fmt.bits = ReadU16(body + 14);
      if (fmt.format == kFormatExtensible && chunk_size >= 26 && available >= 26) {
        fmt.format = ReadU16(body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(data + pos, "data", 4) == 0) {
      payload = body;
      payload_size = std::min<std::size_t>(chunk_size, available);
    }
    pos += 8 + static_cast<std::size_t>(chunk_size) + (chunk_size & 1u);
  }
  if (!have_fmt) throw IoError(path.string() + ": missing fmt chunk");
  if (payload == nullptr) throw IoError(path.string() + ": missing data chunk");
  if (fmt.channels == 0) throw IoError(path.string() + ": zero channels");

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool float32 = fmt.format == kFormatFloat && fmt.bits == 32;
  const bool float64 = fmt.format == kFormatFloat && fmt.bits == 64;
  if (!pcm16 && !float32 && !float64) {
    throw IoError(path.string() + ": unsupported codec (format " + std::to_string(fmt.format) +
                  ", " + std::to_string(fmt.bits) + " bits)");
  }
  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = payload_size / frame_bytes;
  if (frames == 0) throw IoError(path.string() + ": zero-length audio");
  if (fmt.channels > 1) {
    Warn(path.string() + ": " + std::to_string(fmt.channels) +
         " channels, keeping channel 0 only");
  }

  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = payload + i * frame_bytes;
    if (pcm16) {
      samples[i] = static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    } else if (float32) {
      std::uint32_t bits = ReadU32(p);
      float v;
      std::memcpy(&v, &bits, sizeof v);
      samples[i] = v;
    } else {
      std::uint64_t bits = static_cast<std::uint64_t>(ReadU32(p)) |
                           (static_cast<std::uint64_t>(ReadU32(p + 4)) << 32);
      double v;
      std::memcpy(&v, &bits, sizeof v);
      samples[i] = v;
    }
  }
  return AudioBuffer(std::move(samples), static_cast<int>(fmt.sample_rate));
}

void SaveWav(const AudioBuffer& buffer, const std::filesystem::path& path,
             WavFormat format) {
  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(buffer.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate()));
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate()) * (bits / 8));
  PutU16(out, bits / 8);
  PutU16(out, bits);
  out += "data";
  PutU32(out, data_bytes);

  std::size_t clipped = 0;
  for (double s : buffer.samples()) {
    if (format == WavFormat::kPcm16) {
      if (s > 1.0 || s < -1.0) {
        ++clipped;
        s = std::clamp(s, -1.0, 1.0);
      }
      const long q = std::lround(s * 32768.0);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(
                      std::clamp<long>(q, -32768, 32767))));
    } else {
      const float f = static_cast<float>(s);
      std::uint32_t v;
      std::memcpy(&v, &f, sizeof v);
      PutU32(out, v);
    }
  }
  if (clipped > 0) {
    Warn(path.string() + ": clipped " + std::to_string(clipped) +
         " samples outside [-1, 1]");
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for " + path.string());
}

}  // namespace sddrt
