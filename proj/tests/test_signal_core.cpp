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
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "sddrt/audio.hpp"
#include "sddrt/level.hpp"
#include "sddrt/mel.hpp"
#include "sddrt/stft.hpp"
#include "test_util.hpp"

using namespace sddrt;
using sddrt::testing::RandomVector;
using sddrt::testing::TempDir;
using sddrt::testing::WarningCapture;

namespace {

void PutU32(std::ofstream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void PutU16(std::ofstream& out, std::uint16_t v) {
  out.put(static_cast<char>(v & 0xFF));
  out.put(static_cast<char>(v >> 8));
}

// Hand-rolled RIFF writer for integer PCM, independent of SaveWav.
void WriteRawWav(const std::filesystem::path& path, const std::vector<std::int16_t>& interleaved,
                 int channels, int fs, std::uint16_t format_tag = 1) {
  std::ofstream out(path, std::ios::binary);
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  out.write("RIFF", 4);
  PutU32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  PutU32(out, 16);
  PutU16(out, format_tag);
  PutU16(out, static_cast<std::uint16_t>(channels));
  PutU32(out, static_cast<std::uint32_t>(fs));
  PutU32(out, static_cast<std::uint32_t>(fs * channels * 2));
  PutU16(out, static_cast<std::uint16_t>(channels * 2));
  PutU16(out, 16);
  out.write("data", 4);
  PutU32(out, data_bytes);
  for (std::int16_t s : interleaved) PutU16(out, static_cast<std::uint16_t>(s));
}

// Direct O(N^2) DFT power of one windowed frame.
std::vector<double> DftPower(const std::vector<double>& frame, int fft_len) {
  std::vector<double> power(fft_len / 2 + 1);
  for (int k = 0; k <= fft_len / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < frame.size(); ++n) {
      acc += frame[n] * std::polar(1.0, -2.0 * std::numbers::pi * k * static_cast<double>(n) / fft_len);
    }
    power[k] = std::norm(acc);
  }
  return power;
}

}  // namespace

TEST_SUITE("wav") {
  TEST_CASE("silence loads as zeros with the header rate") {
    TempDir dir("wav");
    WriteRawWav(dir / "silence.wav", std::vector<std::int16_t>(16000, 0), 1, 16000);
    const AudioBuffer buf = LoadWav(dir / "silence.wav");
    CHECK(buf.sample_rate() == 16000);
    REQUIRE(buf.size() == 16000);
    CHECK(std::all_of(buf.samples().begin(), buf.samples().end(), [](double s) { return s == 0.0; }));
  }

  TEST_CASE("int16 full scale maps to -1") {
    TempDir dir("wav");
    WriteRawWav(dir / "fs.wav", {-32768, 32767, 16384}, 1, 8000);
    const AudioBuffer buf = LoadWav(dir / "fs.wav");
    CHECK(buf.samples()[0] == -1.0);
    CHECK(buf.samples()[1] == 32767.0 / 32768.0);
    CHECK(buf.samples()[2] == 0.5);
  }

  TEST_CASE("ramp and short files round-trip within one LSB") {
    TempDir dir("wav");
    const AudioBuffer ramp({-1.0, 0.0, 1.0}, 16000);
    {
      WarningCapture warnings;
      SaveWav(ramp, dir / "ramp.wav");
    }
    const AudioBuffer back = LoadWav(dir / "ramp.wav");
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(back.samples()[i] - ramp.samples()[i]) <= 1.0 / 32768.0);
    }

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-0.99, 0.99);
    std::vector<double> v(1000);
    for (double& x : v) x = uni(rng);
    SaveWav(AudioBuffer(v, 22050), dir / "rand.wav");
    const AudioBuffer r = LoadWav(dir / "rand.wav");
    CHECK(r.sample_rate() == 22050);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(r.samples()[i] - v[i]) <= 1.0 / 32768.0);
  }

  TEST_CASE("zeros save as zero PCM frames") {
    TempDir dir("wav");
    SaveWav(AudioBuffer(std::vector<double>(10, 0.0), 16000), dir / "z.wav");
    std::ifstream in(dir / "z.wav", std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
    REQUIRE(bytes.size() == 44 + 20);
    CHECK(std::all_of(bytes.begin() + 44, bytes.end(), [](char c) { return c == 0; }));
  }

  TEST_CASE("out-of-range samples are clipped with a warning") {
    TempDir dir("wav");
    WarningCapture warnings;
    SaveWav(AudioBuffer({1.5, -0.25}, 16000), dir / "clip.wav");
    REQUIRE(warnings.messages.size() == 1);
    CHECK(warnings.messages[0].find("clip") != std::string::npos);
    const AudioBuffer back = LoadWav(dir / "clip.wav");
    CHECK(std::abs(back.samples()[0] - 1.0) <= 1.0 / 32768.0);
    CHECK(back.samples()[1] == -0.25);
  }

  TEST_CASE("float32 round-trip is exact for representable values") {
    TempDir dir("wav");
    const AudioBuffer buf({0.5, -0.125, 2.0}, 48000);
    SaveWav(buf, dir / "f.wav", WavFormat::kFloat32);
    CHECK(LoadWav(dir / "f.wav") == buf);
  }

  TEST_CASE("multichannel input keeps channel 0 and warns") {
    TempDir dir("wav");
    WriteRawWav(dir / "st.wav", {100, -7, 200, -7, 300, -7}, 2, 16000);
    WarningCapture warnings;
    const AudioBuffer buf = LoadWav(dir / "st.wav");
    REQUIRE(buf.size() == 3);
    CHECK(buf.samples()[2] == 300.0 / 32768.0);
    CHECK(warnings.messages.size() == 1);
  }

  TEST_CASE("errors") {
    TempDir dir("wav");
    CHECK_THROWS_AS(LoadWav(dir / "missing.wav"), IoError);
    WriteRawWav(dir / "alaw.wav", {1, 2, 3}, 1, 8000, 6);
    CHECK_THROWS_AS(LoadWav(dir / "alaw.wav"), IoError);
    WriteRawWav(dir / "empty.wav", {}, 1, 8000);
    CHECK_THROWS_AS(LoadWav(dir / "empty.wav"), IoError);
    {
      std::ofstream junk(dir / "junk.wav");
      junk << "not a wave file at all";
    }
    CHECK_THROWS_AS(LoadWav(dir / "junk.wav"), IoError);
    CHECK_THROWS_AS(SaveWav(AudioBuffer({0.0}, 8000), dir / "no_such_dir" / "x.wav"), IoError);
  }

  TEST_CASE("buffer invariants") {
    CHECK_THROWS_AS(AudioBuffer({}, 16000), InvalidArgument);
    CHECK_THROWS_AS(AudioBuffer({0.0}, 0), InvalidArgument);
    CHECK_THROWS_AS(AudioBuffer({std::nan("")}, 16000), InvalidArgument);
    CHECK_THROWS_AS(AudioBuffer({HUGE_VAL}, 16000), InvalidArgument);
  }
}

TEST_SUITE("stft") {
  TEST_CASE("defaults follow the sample rate") {
    const StftConfig cfg = StftConfig::ForSampleRate(16000);
    CHECK(cfg.frame_len == 512);
    CHECK(cfg.hop == 256);
    CHECK(cfg.fft_len == 512);
    CHECK(cfg.window == WindowType::kHamming);
    const StftConfig cfg8 = StftConfig::ForSampleRate(8000);
    CHECK(cfg8.frame_len == 256);
    CHECK(cfg8.fft_len == 256);
    const StftConfig cfg441 = StftConfig::ForSampleRate(44100);
    CHECK(cfg441.fft_len >= cfg441.frame_len);
    CHECK((cfg441.fft_len & (cfg441.fft_len - 1)) == 0);
  }

  TEST_CASE("config validation") {
    StftConfig cfg;
    cfg.hop = 0;
    CHECK_THROWS_AS(cfg.Validate(), InvalidArgument);
    cfg = StftConfig{};
    cfg.hop = cfg.frame_len + 1;
    CHECK_THROWS_AS(cfg.Validate(), InvalidArgument);
    cfg = StftConfig{};
    cfg.fft_len = cfg.frame_len - 2;
    CHECK_THROWS_AS(cfg.Validate(), InvalidArgument);
  }

  TEST_CASE("sine at a bin centre dominates its frame by 60 dB") {
    StftConfig cfg{256, 128, WindowType::kRectangular, 256};
    const int fs = 16000;
    const int bin = 20;
    std::vector<double> x(4096);
    for (std::size_t n = 0; n < x.size(); ++n) {
      x[n] = 0.5 * std::sin(2.0 * std::numbers::pi * bin * static_cast<double>(n) / cfg.fft_len);
    }
    const BandSpectrogram spec = StftLogMagnitude(AudioBuffer(x, fs), cfg);
    for (Eigen::Index l = 0; l < spec.num_frames(); ++l) {
      for (Eigen::Index k = 0; k < spec.num_bands(); ++k) {
        if (k != bin) CHECK(spec.values(bin, l) - spec.values(k, l) >= 60.0);
      }
    }
  }

  TEST_CASE("all-zero input sits on the floor") {
    const BandSpectrogram spec =
        StftLogMagnitude(AudioBuffer(std::vector<double>(2000, 0.0), 16000), StftConfig{});
    CHECK((spec.values.array() == 20.0 * std::log10(kMagnitudeFloor)).all());
  }

  TEST_CASE("shape, frame times and band centres") {
    const StftConfig cfg{400, 160, WindowType::kHann, 512};
    const AudioBuffer buf = sddrt::testing::WhiteNoise(1, 16000);
    const BandSpectrogram spec = StftLogMagnitude(buf, cfg);
    CHECK(spec.num_bands() == 257);
    CHECK(spec.num_frames() == 1 + (16000 - 400) / 160);
    CHECK(NumFrames(16000, cfg) == spec.num_frames());
    CHECK(spec.mode == BandMode::kLinearBins);
    CHECK(spec.frame_period() == doctest::Approx(0.01));
    for (std::size_t i = 1; i < spec.frame_times.size(); ++i) {
      CHECK(spec.frame_times[i] - spec.frame_times[i - 1] == doctest::Approx(0.01).epsilon(1e-12));
    }
    for (std::size_t i = 1; i < spec.band_centers.size(); ++i) {
      CHECK(spec.band_centers[i] > spec.band_centers[i - 1]);
    }
    CHECK(spec.band_centers.back() == doctest::Approx(8000.0));
  }

  TEST_CASE("Parseval on the complex STFT") {
    const StftConfig cfg{512, 256, WindowType::kHamming, 512};
    std::mt19937_64 rng(9);
    const std::vector<double> x = RandomVector(rng, 8000);
    const Eigen::MatrixXcd X = StftComplex(AudioBuffer(x, 16000), cfg);
    const std::vector<double> w = MakeWindow(cfg.window, cfg.frame_len);
    for (Eigen::Index l = 0; l < X.cols(); ++l) {
      double time_energy = 0.0;
      for (int n = 0; n < cfg.frame_len; ++n) {
        const double v = x[l * cfg.hop + n] * w[n];
        time_energy += v * v;
      }
      // One-sided spectrum: interior bins count twice.
      double spec_energy = std::norm(X(0, l)) + std::norm(X(X.rows() - 1, l));
      for (Eigen::Index k = 1; k + 1 < X.rows(); ++k) spec_energy += 2.0 * std::norm(X(k, l));
      CHECK(sddrt::testing::RelDiff(spec_energy, time_energy * cfg.fft_len) <= 1e-6);
    }
  }

  TEST_CASE("zero-padded frames match a direct DFT") {
    const StftConfig cfg{100, 50, WindowType::kHann, 128};
    std::mt19937_64 rng(2);
    const std::vector<double> x = RandomVector(rng, 400);
    const BandSpectrogram spec = StftLogMagnitude(AudioBuffer(x, 8000), cfg);
    const std::vector<double> w = MakeWindow(cfg.window, cfg.frame_len);
    std::vector<double> frame(cfg.frame_len);
    for (int n = 0; n < cfg.frame_len; ++n) frame[n] = x[50 + n] * w[n];
    const std::vector<double> power = DftPower(frame, cfg.fft_len);
    for (int k = 0; k <= cfg.fft_len / 2; ++k) {
      CHECK(spec.values(k, 1) ==
            doctest::Approx(20.0 * std::log10(std::sqrt(power[k]) + kMagnitudeFloor)).epsilon(1e-9));
    }
  }

  TEST_CASE("windows are periodic") {
    const std::vector<double> hann = MakeWindow(WindowType::kHann, 8);
    CHECK(hann[0] == doctest::Approx(0.0));
    CHECK(hann[4] == doctest::Approx(1.0));
    const std::vector<double> ham = MakeWindow(WindowType::kHamming, 8);
    CHECK(ham[0] == doctest::Approx(0.08));
    CHECK(ham[4] == doctest::Approx(1.0));
  }

  TEST_CASE("signal shorter than one frame is an error") {
    CHECK_THROWS_AS(StftLogMagnitude(AudioBuffer(std::vector<double>(100, 0.1), 16000), StftConfig{}),
                    InvalidArgument);
  }
}

TEST_SUITE("mel") {
  TEST_CASE("mel scale closed form") {
    CHECK(HzToMel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(HzToMel(700.0) == doctest::Approx(781.17).epsilon(1e-5));
    CHECK(MelToHz(HzToMel(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
    CHECK(HzToMel(0.0) == 0.0);
  }

  TEST_CASE("two bands over a toy grid are normalized") {
    const MelFilterbank fb = BuildMelFilterbank(9, 2, 16000);
    REQUIRE(fb.num_bands() == 2);
    REQUIRE(fb.num_bins() == 9);
    for (int b = 0; b < 2; ++b) CHECK(fb.weights.row(b).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((fb.weights.array() >= 0.0).all());
  }

  TEST_CASE("default bank: rows sum to one, centres on the mel grid, full coverage") {
    const int fs = 16000;
    const int n_bins = 257;
    const int n_bands = 23;
    const MelFilterbank fb = BuildMelFilterbank(n_bins, n_bands, fs);
    const double top = HzToMel(fs / 2.0);
    for (int b = 0; b < n_bands; ++b) {
      CHECK(std::abs(fb.weights.row(b).sum() - 1.0) <= 1e-12);
      CHECK(fb.weights.row(b).maxCoeff() > 0.0);
      CHECK(fb.band_centers[b] == doctest::Approx(MelToHz(top * (b + 1) / (n_bands + 1))).epsilon(1e-12));
    }
    const double bin_hz = fs / 2.0 / (n_bins - 1);
    for (int k = 0; k < n_bins; ++k) {
      const double f = k * bin_hz;
      if (f >= fb.band_centers.front() && f <= fb.band_centers.back()) {
        CHECK(fb.weights.col(k).sum() > 0.0);
      }
    }
  }

  TEST_CASE("too many bands is an error") {
    CHECK_THROWS_AS(BuildMelFilterbank(8, 9, 16000), InvalidArgument);
    CHECK_THROWS_AS(BuildMelFilterbank(8, 1, 16000), InvalidArgument);
  }

  BandSpectrogram LinearSpec(const Eigen::MatrixXd& values) {
    BandSpectrogram s;
    s.values = values;
    for (Eigen::Index k = 0; k < values.rows(); ++k) s.band_centers.push_back(31.25 * k);
    for (Eigen::Index l = 0; l < values.cols(); ++l) s.frame_times.push_back(0.016 * l);
    return s;
  }

  TEST_CASE("flat frame is unchanged by banding") {
    const MelFilterbank fb = BuildMelFilterbank(257, 23, 16000);
    const BandSpectrogram mel = ApplyMel(LinearSpec(Eigen::MatrixXd::Constant(257, 3, -17.5)), fb);
    CHECK(mel.mode == BandMode::kMelBands);
    CHECK(mel.num_bands() == 23);
    CHECK(((mel.values.array() + 17.5).abs() <= 1e-9).all());
  }

  TEST_CASE("single active bin lights only overlapping bands") {
    const MelFilterbank fb = BuildMelFilterbank(257, 23, 16000);
    const double floor_db = 20.0 * std::log10(kMagnitudeFloor);
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(257, 1, floor_db);
    v(100, 0) = 0.0;
    const BandSpectrogram mel = ApplyMel(LinearSpec(v), fb);
    for (int b = 0; b < 23; ++b) {
      const bool overlaps = fb.weights(b, 100) > 0.0;
      CHECK((mel.values(b, 0) > floor_db + 1.0) == overlaps);
    }
  }

  TEST_CASE("random frames match a brute-force power mean") {
    const MelFilterbank fb = BuildMelFilterbank(129, 12, 8000);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-90.0, 10.0);
    Eigen::MatrixXd v(129, 4);
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = uni(rng);
    const BandSpectrogram mel = ApplyMel(LinearSpec(v), fb);
    for (int b = 0; b < 12; ++b) {
      for (int l = 0; l < 4; ++l) {
        double num = 0.0;
        double den = 0.0;
        for (int k = 0; k < 129; ++k) {
          num += fb.weights(b, k) * std::pow(10.0, v(k, l) / 10.0);
          den += fb.weights(b, k);
        }
        CHECK(std::abs(mel.values(b, l) - 10.0 * std::log10(num / den)) <= 1e-9);
      }
    }
  }

  TEST_CASE("fast mel path agrees with banding the linear spectrogram") {
    const StftConfig cfg{};
    const MelFilterbank fb = BuildMelFilterbank(cfg.num_bins(), 23, 16000);
    const AudioBuffer buf = sddrt::testing::WhiteNoise(4, 8000);
    const BandSpectrogram fast = MelLogSpectrogram(buf, cfg, fb);
    const BandSpectrogram slow = ApplyMel(StftLogMagnitude(buf, cfg), fb);
    CHECK(((fast.values - slow.values).array().abs() <= 1e-9).all());
  }

  TEST_CASE("dimension mismatch is an error") {
    const MelFilterbank fb = BuildMelFilterbank(257, 23, 16000);
    CHECK_THROWS_AS(ApplyMel(LinearSpec(Eigen::MatrixXd::Zero(129, 2)), fb), InvalidArgument);
  }
}

TEST_SUITE("level") {
  TEST_CASE("constant 0.1 is -20 dB") {
    CHECK(ActiveSpeechLevel(AudioBuffer(std::vector<double>(16000, 0.1), 16000)) ==
          doctest::Approx(-20.0).epsilon(1e-9));
  }

  TEST_CASE("padding with silence leaves the level unchanged") {
    const AudioBuffer burst = sddrt::testing::WhiteNoise(3, 8000, 16000, 0.05);
    std::vector<double> padded(40000, 0.0);
    std::copy(burst.samples().begin(), burst.samples().end(), padded.begin() + 16000);
    const double trimmed = RmsLevelDb(burst.samples());
    CHECK(std::abs(ActiveSpeechLevel(AudioBuffer(padded, 16000)) - trimmed) <= 0.2);
  }

  TEST_CASE("silence has no active frames") {
    CHECK_THROWS_WITH_AS(ActiveSpeechLevel(AudioBuffer(std::vector<double>(1600, 0.0), 16000)),
                         doctest::Contains("no active frames"), InvalidArgument);
  }
}

TEST_SUITE("mix") {
  TEST_CASE("equal levels at 0 dB give unit gain") {
    std::vector<double> speech(16000);
    for (std::size_t i = 0; i < speech.size(); ++i) speech[i] = (i % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> noise(16000);
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = (i % 4 < 2) ? 1.0 : -1.0;
    CHECK(NoiseGainForSnr(AudioBuffer(speech, 16000), AudioBuffer(noise, 16000), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("realized SNR matches the operating points") {
    const AudioBuffer speech = sddrt::testing::WhiteNoise(1, 32000, 16000, 0.2);
    const AudioBuffer noise = sddrt::testing::WhiteNoise(2, 40000, 16000, 0.7);
    for (double snr : {-1.0, 12.0, 18.0}) {
      const AudioBuffer mixed = MixAtSnr(speech, noise, snr);
      REQUIRE(mixed.size() == speech.size());
      std::vector<double> extracted(speech.size());
      for (std::size_t i = 0; i < extracted.size(); ++i) {
        extracted[i] = mixed.samples()[i] - speech.samples()[i];
      }
      const double realized = ActiveSpeechLevel(speech) - RmsLevelDb(extracted);
      CHECK(std::abs(realized - snr) <= 0.1);
    }
  }

  TEST_CASE("noise component scales with the speech") {
    const AudioBuffer speech = sddrt::testing::WhiteNoise(5, 16000);
    const AudioBuffer noise = sddrt::testing::WhiteNoise(6, 16000);
    const AudioBuffer base = MixAtSnr(speech, noise, 12.0);
    for (double g : {0.1, 10.0}) {
      const AudioBuffer scaled_speech = speech.Scaled(g);
      const AudioBuffer mixed = MixAtSnr(scaled_speech, noise, 12.0);
      for (std::size_t i = 0; i < speech.size(); i += 97) {
        const double n_base = base.samples()[i] - speech.samples()[i];
        const double n_scaled = mixed.samples()[i] - scaled_speech.samples()[i];
        CHECK(std::abs(n_scaled - g * n_base) <= 1e-9 * std::abs(g * n_base) + 1e-15);
      }
    }
  }

  TEST_CASE("infinite SNR returns the speech") {
    const AudioBuffer speech = sddrt::testing::WhiteNoise(5, 1600);
    const AudioBuffer noise = sddrt::testing::WhiteNoise(6, 1600);
    CHECK(MixAtSnr(speech, noise, HUGE_VAL) == speech);
  }

  TEST_CASE("errors") {
    const AudioBuffer speech = sddrt::testing::WhiteNoise(5, 1600);
    CHECK_THROWS_AS(MixAtSnr(speech, sddrt::testing::WhiteNoise(6, 1600, 8000), 0.0), InvalidArgument);
    CHECK_THROWS_AS(MixAtSnr(speech, sddrt::testing::WhiteNoise(6, 1599), 0.0), InvalidArgument);
    CHECK_THROWS_AS(MixAtSnr(speech, AudioBuffer(std::vector<double>(1600, 0.0), 16000), 0.0),
                    InvalidArgument);
  }
}
