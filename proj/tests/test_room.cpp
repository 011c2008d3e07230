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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "sddrt/rir_io.hpp"
#include "sddrt/room.hpp"
#include "test_util.hpp"

using namespace sddrt;
using sddrt::testing::TempDir;

namespace {

// h[n] = exp(-n / tau): energy decays by 60 dB after 3 ln(10) tau samples.
std::vector<double> ExponentialRir(double t60, int fs) {
  const double tau = t60 * fs / (3.0 * std::log(10.0));
  const auto n = static_cast<std::size_t>(1.2 * t60 * fs) + 2;
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = std::exp(-static_cast<double>(i) / tau);
  return h;
}

// Exponentially decaying noise with an analytic energy envelope.
std::vector<double> NoiseEnvelopeRir(double t60, int fs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto n = static_cast<std::size_t>(1.5 * t60 * fs);
  std::vector<double> h(n);
  const double k = 3.0 * std::log(10.0) / (t60 * fs);
  for (std::size_t i = 0; i < n; ++i) h[i] = g(rng) * std::exp(-k * static_cast<double>(i));
  return h;
}

std::vector<double> DirectConvolution(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> y(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) y[i + j] += a[i] * b[j];
  }
  return y;
}

double Distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST_SUITE("sabine") {
  TEST_CASE("closed form") {
    const Vec3 cube{5.0, 5.0, 5.0};
    CHECK(SabineAbsorption(cube, 0.5) == doctest::Approx(0.161 * 125.0 / (150.0 * 0.5)).epsilon(1e-12));
    CHECK(SabineAbsorption(cube, 0.5) == doctest::Approx(0.2683).epsilon(1e-3));
    CHECK(SabineAbsorption(cube, 1.0) == doctest::Approx(0.5 * SabineAbsorption(cube, 0.5)).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(SabineAbsorption(cube, 0.05), doctest::Contains("cannot achieve"), InvalidArgument);
  }

  TEST_CASE("image-source absorption inverts its decay model") {
    const Vec3 dims{6.0, 5.0, 3.0};
    for (double t60 : {0.2, 0.6, 1.5}) {
      const double alpha = ImageSourceAbsorption(dims, t60);
      CHECK(alpha > 0.0);
      CHECK(alpha < 1.0);
      CHECK(ImageSourceDecayT60(dims, alpha) == doctest::Approx(t60).epsilon(1e-6));
    }
    CHECK(ImageSourceAbsorption(dims, 0.3) > ImageSourceAbsorption(dims, 0.9));
    CHECK_THROWS_AS(ImageSourceAbsorption(dims, 0.0), InvalidArgument);
  }
}

TEST_SUITE("image method") {
  TEST_CASE("fully absorbing walls leave the direct path") {
    RoomSpec spec;
    spec.absorption = 1.0;
    spec.highpass_hz = 0.0;
    const Rir rir = ImageMethodRir(spec);
    const double d = Distance(spec.source, spec.mic);
    const auto delay = static_cast<std::size_t>(std::lround(spec.sample_rate * d / kSpeedOfSound));
    REQUIRE(rir.response.size() == static_cast<std::size_t>(std::lround(spec.rir_length * spec.sample_rate)));
    for (std::size_t i = 0; i < rir.response.size(); ++i) {
      if (i == delay) {
        CHECK(rir.response.samples()[i] == doctest::Approx(1.0 / (4.0 * std::numbers::pi * d)).epsilon(1e-12));
      } else {
        CHECK(rir.response.samples()[i] == 0.0);
      }
    }
    REQUIRE(rir.room.has_value());
  }

  TEST_CASE("1.715 m arrives at sample 80") {
    RoomSpec spec;
    spec.source = {2.0, 2.0, 1.5};
    spec.mic = {2.0 + 1.715, 2.0, 1.5};
    spec.absorption = 1.0;
    spec.highpass_hz = 0.0;
    const Rir rir = ImageMethodRir(spec);
    const auto s = rir.response.samples();
    const auto first = std::find_if(s.begin(), s.end(), [](double v) { return v != 0.0; });
    CHECK(first - s.begin() == 80);
  }

  TEST_CASE("direct path is the first arrival and energy is finite") {
    RoomSpec spec;
    spec.target_t60 = 0.6;
    spec.rir_length = 1.1;
    const Rir rir = ImageMethodRir(spec);
    const double d = Distance(spec.source, spec.mic);
    const auto delay = static_cast<std::ptrdiff_t>(std::lround(spec.sample_rate * d / kSpeedOfSound));
    const auto s = rir.response.samples();
    const auto first = std::find_if(s.begin(), s.end(), [](double v) { return v != 0.0; });
    CHECK(first - s.begin() == delay);
    double energy = 0.0;
    for (double v : s) energy += v * v;
    CHECK(std::isfinite(energy));
    CHECK(energy > 0.0);
  }

  TEST_CASE("generation is deterministic") {
    RoomSpec spec;
    spec.target_t60 = 0.4;
    CHECK(ImageMethodRir(spec).response == ImageMethodRir(spec).response);
  }

  TEST_CASE("measured T60 tracks the target in a 6x5x3 room") {
    for (AbsorptionModel model : {AbsorptionModel::kImageSource, AbsorptionModel::kSabine}) {
      for (double t60 : {0.2, 0.5, 1.0, 1.85}) {
        RoomSpec spec;
        spec.target_t60 = t60;
        spec.rir_length = 1.5 * t60 + 0.2;
        spec.absorption_model = model;
        const double measured = MeasureT60(ImageMethodRir(spec).response);
        CHECK(measured == doctest::Approx(t60).epsilon(0.2));
      }
    }
  }

  TEST_CASE("short explicit order raises the truncation flag") {
    RoomSpec spec;
    spec.target_t60 = 0.8;
    spec.rir_length = 1.4;
    spec.max_image_order = 2;
    CHECK(ImageMethodRir(spec).order_truncated);
    spec.max_image_order = 0;
    CHECK(!ImageMethodRir(spec).order_truncated);
  }

  TEST_CASE("spec validation") {
    RoomSpec spec;
    spec.mic = {7.0, 1.0, 1.0};
    CHECK_THROWS_AS(spec.Validate(), InvalidArgument);
    spec = RoomSpec{};
    spec.rir_length = 0.2;
    spec.target_t60 = 0.5;
    CHECK_THROWS_AS(spec.Validate(), InvalidArgument);
    spec = RoomSpec{};
    spec.dims = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(spec.Validate(), InvalidArgument);
  }
}

TEST_SUITE("edc") {
  TEST_CASE("single impulse drops to the floor") {
    const Edc edc = SchroederEdc(std::vector<double>{0.7, 0.0, 0.0});
    CHECK(edc.curve[0] == 0.0);
    CHECK(edc.curve[1] == kEdcFloorDb);
    CHECK(edc.curve[2] == kEdcFloorDb);
  }

  TEST_CASE("exponential decay gives a straight line") {
    const double tau = 100.0;
    std::vector<double> h(2000);
    for (std::size_t n = 0; n < h.size(); ++n) h[n] = std::exp(-static_cast<double>(n) / tau);
    const Edc edc = SchroederEdc(h);
    // Geometric tail sums: exact slope -20 / (tau ln 10) dB per sample.
    for (std::size_t n = 1; n < 1500; n += 37) {
      CHECK(std::abs(edc.curve[n] + (20.0 / std::log(10.0)) * (n / tau)) <= 0.01);
    }
  }

  TEST_CASE("monotone with 0 dB start on random input") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const std::vector<double> h = sddrt::testing::RandomVector(rng, 500 + 100 * trial);
      const Edc edc = SchroederEdc(h);
      CHECK(edc.curve[0] == 0.0);
      for (std::size_t i = 1; i < edc.curve.size(); ++i) CHECK(edc.curve[i] <= edc.curve[i - 1]);
    }
  }

  TEST_CASE("zero energy is an error") {
    CHECK_THROWS_AS(SchroederEdc(std::vector<double>(10, 0.0)), InvalidArgument);
  }
}

TEST_SUITE("t60 fit") {
  TEST_CASE("linear EDC of -100 dB/s gives 0.6 s") {
    const int fs = 1000;
    Edc edc;
    for (int n = 0; n < 600; ++n) edc.curve.push_back(-100.0 * n / fs);
    CHECK(T60FromEdc(edc, fs) == doctest::Approx(0.6).epsilon(1e-9));
  }

  TEST_CASE("exponential RIRs recover their analytic T60") {
    for (double t60 = 0.1; t60 <= 2.0 + 1e-9; t60 += 0.1) {
      const std::vector<double> h = ExponentialRir(t60, 16000);
      CHECK(MeasureT60(AudioBuffer(h, 16000)) == doctest::Approx(t60).epsilon(0.02));
    }
  }

  TEST_CASE("noise under an exponential envelope") {
    CHECK(MeasureT60(AudioBuffer(NoiseEnvelopeRir(0.5, 16000, 3), 16000)) ==
          doctest::Approx(0.5).epsilon(0.02));
  }

  TEST_CASE("relabelling the rate scales T60") {
    const std::vector<double> h = NoiseEnvelopeRir(0.4, 16000, 5);
    const double a = MeasureT60(AudioBuffer(h, 16000));
    const double b = MeasureT60(AudioBuffer(h, 8000));
    CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-12));
  }

  TEST_CASE("decay that never reaches -35 dB") {
    std::vector<double> h(1000);
    for (std::size_t n = 0; n < h.size(); ++n) h[n] = std::exp(-static_cast<double>(n) / 2000.0);
    CHECK_THROWS_AS(MeasureT60(AudioBuffer(h, 16000)), EstimationError);
    CHECK_THROWS_AS(MeasureT60(AudioBuffer({1.0, 0.0, 0.0}, 16000)), EstimationError);
  }
}

TEST_SUITE("convolution") {
  TEST_CASE("3-tap RIR on a 4-sample signal") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> h{0.5, -1.0, 0.25};
    const std::vector<double> expected{0.5, 0.0, -0.25, -0.5, -3.25, 1.0};
    const std::vector<double> y = Convolve(x, h);
    REQUIRE(y.size() == expected.size());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }

  TEST_CASE("FFT path matches direct summation") {
    std::mt19937_64 rng(6);
    for (auto [na, nb] : {std::pair{1000, 300}, std::pair{65, 4097}, std::pair{5000, 70}}) {
      const std::vector<double> a = sddrt::testing::RandomVector(rng, na);
      const std::vector<double> b = sddrt::testing::RandomVector(rng, nb);
      const std::vector<double> fast = Convolve(a, b);
      const std::vector<double> slow = DirectConvolution(a, b);
      REQUIRE(fast.size() == slow.size());
      double max_err = 0.0;
      for (std::size_t i = 0; i < fast.size(); ++i) max_err = std::max(max_err, std::abs(fast[i] - slow[i]));
      CHECK(max_err <= 1e-9);
    }
  }

  TEST_CASE("unit impulse is the identity") {
    const AudioBuffer x = sddrt::testing::WhiteNoise(1, 5000);
    const AudioBuffer y = Convolve(x, AudioBuffer({1.0}, 16000));
    CHECK(y == x);
  }

  TEST_CASE("rate mismatch") {
    CHECK_THROWS_AS(Convolve(AudioBuffer({1.0}, 16000), AudioBuffer({1.0}, 8000)), InvalidArgument);
  }
}

TEST_SUITE("rir io") {
  TEST_CASE("response and sidecar round-trip") {
    TempDir dir("rir");
    RoomSpec spec;
    spec.target_t60 = 0.3;
    const Rir rir = ImageMethodRir(spec);
    const auto t60 = SaveRir(rir, dir / "r.wav");
    REQUIRE(t60.has_value());
    CHECK(ReadSidecarT60(dir / "r.wav") == t60);
    const AudioBuffer back = LoadWav(dir / "r.wav");
    REQUIRE(back.size() == rir.response.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back.samples()[i] == static_cast<double>(static_cast<float>(rir.response.samples()[i])));
    }
    const RoomSpec again = RoomSpecFromJson(RoomSpecToJson(spec));
    CHECK(again.dims == spec.dims);
    CHECK(again.target_t60 == spec.target_t60);
  }

  TEST_CASE("unmeasurable responses store null") {
    TempDir dir("rir");
    const auto t60 = SaveRir(Rir{AudioBuffer({1.0}, 16000), std::nullopt, false}, dir / "imp.wav");
    CHECK(!t60.has_value());
    CHECK(!ReadSidecarT60(dir / "imp.wav").has_value());
    CHECK(RirSidecarPath(dir / "imp.wav").filename() == "imp.json");
  }
}
