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
#ifndef SDDRT_ROOM_HPP_
#define SDDRT_ROOM_HPP_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "sddrt/audio.hpp"

namespace sddrt {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

using Vec3 = std::array<double, 3>;

// Uniform Sabine absorption a = 0.161 V / (S t60) for a shoebox room.
// Throws InvalidArgument when the room cannot reach t60 (a > 1).
double SabineAbsorption(const Vec3& dims, double t60);

// Uniform absorption that makes the specular image expansion of this room
// decay with the given T30-style T60. The model averages the reflection
// count per unit path length over arrival directions, so it captures the
// slow decay along a room's long axes that Sabine and Eyring ignore.
double ImageSourceAbsorption(const Vec3& dims, double t60);

// Forward direction of the model above: predicted T60 for absorption alpha.
double ImageSourceDecayT60(const Vec3& dims, double alpha);

enum class AbsorptionModel { kImageSource, kSabine };

struct RoomSpec {
  Vec3 dims{6.0, 5.0, 3.0};
  Vec3 source{2.0, 2.0, 1.5};
  Vec3 mic{4.0, 3.0, 1.5};
  double target_t60 = 0.5;
  int sample_rate = 16000;
  double rir_length = 1.0;  // seconds
  // 0 picks an order that covers rir_length.
  int max_image_order = 0;
  AbsorptionModel absorption_model = AbsorptionModel::kImageSource;
  // Overrides the model-derived absorption when set.
  std::optional<double> absorption;
  // Second-order Butterworth high-pass applied to the response, removing the
  // DC build-up of coincident all-positive image pulses. 0 disables it.
  double highpass_hz = 50.0;

  void Validate() const;
  double Absorption() const;
  int ImageOrder() const;
};

struct Rir {
  AudioBuffer response;
  std::optional<RoomSpec> room;  // empty for measured responses
  // Images beyond max_image_order could still have arrived within the
  // response length.
  bool order_truncated = false;
};

// Rectangular-room image expansion. Wall reflection gain sqrt(1 - a),
// spherical spreading 1 / (4 pi d), delay rounded to the nearest sample,
// followed by the optional high-pass. Images are summed in a fixed order.
Rir ImageMethodRir(const RoomSpec& spec);

// Schroeder backward-integrated energy decay, 0 dB at the first sample.
struct Edc {
  std::vector<double> curve;  // dB, non-increasing
};

// dB value used where the remaining energy is exactly zero.
inline constexpr double kEdcFloorDb = -400.0;

Edc SchroederEdc(std::span<const double> rir);
inline Edc SchroederEdc(const AudioBuffer& rir) { return SchroederEdc(rir.samples()); }

// T30 convention: line fit to the EDC between -5 and -35 dB, extrapolated
// to 60 dB of decay.
double T60FromEdc(const Edc& edc, int sample_rate);

// Measured T60 of an impulse response.
double MeasureT60(const AudioBuffer& rir);

// Full linear convolution, length a + b - 1.
std::vector<double> Convolve(std::span<const double> a, std::span<const double> b);
AudioBuffer Convolve(const AudioBuffer& signal, const AudioBuffer& rir);

}  // namespace sddrt

#endif  // SDDRT_ROOM_HPP_
