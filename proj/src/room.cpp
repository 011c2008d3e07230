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
#include "sddrt/room.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fft.hpp"
#include "sddrt/error.hpp"

namespace sddrt {

double SabineAbsorption(const Vec3& dims, double t60) {
  for (double d : dims) {
    if (!(d > 0.0)) throw InvalidArgument("room dimensions must be positive");
  }
  if (!(t60 > 0.0)) throw InvalidArgument("target T60 must be positive");
  const double volume = dims[0] * dims[1] * dims[2];
  const double surface = 2.0 * (dims[0] * dims[1] + dims[0] * dims[2] + dims[1] * dims[2]);
  const double alpha = 0.161 * volume / (surface * t60);
  if (alpha > 1.0) {
    throw InvalidArgument("room cannot achieve target T60 of " + std::to_string(t60) +
                          " s (Sabine absorption " + std::to_string(alpha) + " > 1)");
  }
  return alpha;
}

namespace {

// Decay rate per neper of wall loss for a grid of directions over one octant:
// c * (|ux| / Lx + |uy| / Ly + |uz| / Lz). Uniform in uz and azimuth, which
// is uniform in solid angle.
std::vector<double> DirectionalRates(const Vec3& dims) {
  constexpr int kGrid = 32;
  std::vector<double> rates;
  rates.reserve(kGrid * kGrid);
  for (int i = 0; i < kGrid; ++i) {
    const double uz = (i + 0.5) / kGrid;
    const double s = std::sqrt(1.0 - uz * uz);
    for (int j = 0; j < kGrid; ++j) {
      const double phi = (j + 0.5) / kGrid * 0.5 * std::numbers::pi;
      rates.push_back(kSpeedOfSound *
                      (s * std::cos(phi) / dims[0] + s * std::sin(phi) / dims[1] + uz / dims[2]));
    }
  }
  return rates;
}

// Model EDC in dB: 10 log10(<exp(-k r t) / r> / <1 / r>), k = -ln(1 - alpha).
class DecayModel {
 public:
  DecayModel(const Vec3& dims, double alpha) : rates_(DirectionalRates(dims)) {
    k_ = -std::log1p(-alpha);
    total_ = Tail(0.0);
  }

  double CurveDb(double t) const { return 10.0 * std::log10(Tail(t) / total_); }

  double Crossing(double level_db) const {
    double lo = 0.0;
    double hi = 0.05;
    while (CurveDb(hi) > level_db) hi *= 2.0;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (CurveDb(mid) > level_db ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  double Tail(double t) const {
    double acc = 0.0;
    for (double r : rates_) acc += std::exp(-k_ * r * t) / (k_ * r);
    return acc;
  }

  std::vector<double> rates_;
  double k_ = 0.0;
  double total_ = 0.0;
};

}  // namespace

double ImageSourceDecayT60(const Vec3& dims, double alpha) {
  for (double d : dims) {
    if (!(d > 0.0)) throw InvalidArgument("room dimensions must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("absorption must lie in (0, 1)");
  // Same T30 convention as T60FromEdc, on a uniform time grid.
  constexpr int kPoints = 64;
  const DecayModel model(dims, alpha);
  const double t5 = model.Crossing(-5.0);
  const double t35 = model.Crossing(-35.0);
  double mean_t = 0.0;
  double mean_y = 0.0;
  std::array<double, kPoints> ts{};
  std::array<double, kPoints> ys{};
  for (int i = 0; i < kPoints; ++i) {
    ts[i] = t5 + (t35 - t5) * i / (kPoints - 1);
    ys[i] = model.CurveDb(ts[i]);
    mean_t += ts[i] / kPoints;
    mean_y += ys[i] / kPoints;
  }
  double stt = 0.0;
  double sty = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    stt += (ts[i] - mean_t) * (ts[i] - mean_t);
    sty += (ts[i] - mean_t) * (ys[i] - mean_y);
  }
  return -60.0 * stt / sty;
}

double ImageSourceAbsorption(const Vec3& dims, double t60) {
  if (!(t60 > 0.0)) throw InvalidArgument("target T60 must be positive");
  // Predicted T60 falls monotonically with alpha; bisect in log(alpha).
  double lo = std::log(1e-6);
  double hi = std::log(1.0 - 1e-9);
  if (ImageSourceDecayT60(dims, std::exp(hi)) > t60) {
    throw InvalidArgument("room cannot achieve target T60 of " + std::to_string(t60) + " s");
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ImageSourceDecayT60(dims, std::exp(mid)) > t60 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

void RoomSpec::Validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(dims[i] > 0.0)) throw InvalidArgument("room dimensions must be positive");
    if (!(source[i] > 0.0 && source[i] < dims[i])) {
      throw InvalidArgument("source lies outside the room");
    }
    if (!(mic[i] > 0.0 && mic[i] < dims[i])) throw InvalidArgument("mic lies outside the room");
  }
  if (!(target_t60 > 0.0)) throw InvalidArgument("target T60 must be positive");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!(rir_length >= target_t60)) {
    throw InvalidArgument("rir_length must be at least the target T60");
  }
  if (max_image_order < 0) throw InvalidArgument("max_image_order must be non-negative");
  if (!(highpass_hz >= 0.0 && highpass_hz < 0.5 * sample_rate)) {
    throw InvalidArgument("high-pass cutoff must lie in [0, fs / 2)");
  }
  if (absorption && !(*absorption >= 0.0 && *absorption <= 1.0)) {
    throw InvalidArgument("absorption must lie in [0, 1]");
  }
  const double dx = source[0] - mic[0];
  const double dy = source[1] - mic[1];
  const double dz = source[2] - mic[2];
  if (std::sqrt(dx * dx + dy * dy + dz * dz) < 1e-3) {
    throw InvalidArgument("source and mic coincide");
  }
}

double RoomSpec::Absorption() const {
  if (absorption) return *absorption;
  return absorption_model == AbsorptionModel::kSabine ? SabineAbsorption(dims, target_t60)
                                                      : ImageSourceAbsorption(dims, target_t60);
}

int RoomSpec::ImageOrder() const {
  if (max_image_order > 0) return max_image_order;
  const double min_dim = std::min({dims[0], dims[1], dims[2]});
  return static_cast<int>(std::ceil(kSpeedOfSound * rir_length / (2.0 * min_dim))) + 1;
}

namespace {

// Image offsets along one axis that can arrive within max_distance.
struct AxisImage {
  double offset2;   // squared source-image to mic offset
  int reflections;
};

// Second-order Butterworth high-pass (bilinear transform), in place.
void HighPass(std::vector<double>& x, double cutoff_hz, int sample_rate) {
  const double w = std::tan(std::numbers::pi * cutoff_hz / sample_rate);
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * w + w * w);
  const double b0 = norm;
  const double b1 = -2.0 * norm;
  const double b2 = norm;
  const double a1 = 2.0 * (w * w - 1.0) * norm;
  const double a2 = (1.0 - std::numbers::sqrt2 * w + w * w) * norm;
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = v;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

std::vector<AxisImage> AxisImages(double length, double src, double mic, int order,
                                  double max_distance) {
  std::vector<AxisImage> out;
  for (int p = 0; p <= 1; ++p) {
    for (int n = -order; n <= order; ++n) {
      const double x = (1 - 2 * p) * src + 2.0 * n * length - mic;
      if (std::abs(x) > max_distance) continue;
      out.push_back({x * x, std::abs(n - p) + std::abs(n)});
    }
  }
  return out;
}

}  // namespace

Rir ImageMethodRir(const RoomSpec& spec) {
  spec.Validate();
  const double alpha = spec.Absorption();
  const double beta = std::sqrt(1.0 - alpha);
  const int order = spec.ImageOrder();
  const auto length = static_cast<std::size_t>(std::lround(spec.rir_length * spec.sample_rate));
  const double max_distance = kSpeedOfSound * static_cast<double>(length) / spec.sample_rate;
  const double max_d2 = max_distance * max_distance;

  std::vector<AxisImage> axes[3];
  for (int i = 0; i < 3; ++i) {
    axes[i] = AxisImages(spec.dims[i], spec.source[i], spec.mic[i], order, max_distance);
  }

  // Powers of beta by reflection count, up to the largest possible total.
  const int max_reflections = 3 * (2 * order + 1);
  std::vector<double> beta_pow(static_cast<std::size_t>(max_reflections) + 1);
  for (int k = 0; k <= max_reflections; ++k) beta_pow[k] = std::pow(beta, k);

  std::vector<double> h(length, 0.0);
  const double samples_per_meter = spec.sample_rate / kSpeedOfSound;
  for (const AxisImage& ix : axes[0]) {
    for (const AxisImage& iy : axes[1]) {
      const double dxy2 = ix.offset2 + iy.offset2;
      if (dxy2 > max_d2) continue;
      for (const AxisImage& iz : axes[2]) {
        const double d2 = dxy2 + iz.offset2;
        if (d2 > max_d2) continue;
        const double d = std::sqrt(d2);
        const auto delay = static_cast<std::size_t>(std::lround(d * samples_per_meter));
        if (delay >= length) continue;
        const double gain = beta_pow[ix.reflections + iy.reflections + iz.reflections];
        if (gain == 0.0) continue;
        h[delay] += gain / (4.0 * std::numbers::pi * d);
      }
    }
  }

  if (spec.highpass_hz > 0.0) HighPass(h, spec.highpass_hz, spec.sample_rate);

  Rir rir{AudioBuffer(std::move(h), spec.sample_rate), spec, false};
  const double min_dim = std::min({spec.dims[0], spec.dims[1], spec.dims[2]});
  if (beta > 0.0 && 2.0 * order * min_dim < max_distance) {
    rir.order_truncated = true;
    Warn("image order " + std::to_string(order) + " does not cover the " +
         std::to_string(spec.rir_length) + " s response");
  }
  return rir;
}

Edc SchroederEdc(std::span<const double> rir) {
  if (rir.empty()) throw InvalidArgument("empty impulse response");
  std::vector<long double> tail(rir.size() + 1, 0.0L);
  for (std::size_t n = rir.size(); n-- > 0;) {
    tail[n] = tail[n + 1] + static_cast<long double>(rir[n]) * rir[n];
  }
  const long double total = tail[0];
  if (!(total > 0.0L)) throw InvalidArgument("impulse response has zero energy");

  Edc edc;
  edc.curve.resize(rir.size());
  for (std::size_t n = 0; n < rir.size(); ++n) {
    const double ratio = static_cast<double>(tail[n] / total);
    edc.curve[n] = ratio > 0.0 ? std::max(10.0 * std::log10(ratio), kEdcFloorDb) : kEdcFloorDb;
  }
  edc.curve[0] = 0.0;
  return edc;
}

double T60FromEdc(const Edc& edc, int sample_rate) {
  constexpr double kFitStartDb = -5.0;
  constexpr double kFitEndDb = -35.0;
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const auto& c = edc.curve;
  const auto start = std::find_if(c.begin(), c.end(), [](double v) { return v <= kFitStartDb; });
  const auto end = std::find_if(start, c.end(), [](double v) { return v <= kFitEndDb; });
  if (end == c.end()) {
    throw EstimationError("energy decay never reaches -35 dB; response too short");
  }
  // Least-squares line through (n / fs, curve[n]) over the fit range.
  const auto first = static_cast<std::size_t>(start - c.begin());
  const auto last = static_cast<std::size_t>(end - c.begin());
  const double count = static_cast<double>(last - first + 1);
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (std::size_t n = first; n <= last; ++n) {
    mean_t += static_cast<double>(n) / sample_rate;
    mean_y += c[n];
  }
  mean_t /= count;
  mean_y /= count;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t n = first; n <= last; ++n) {
    const double dt = static_cast<double>(n) / sample_rate - mean_t;
    stt += dt * dt;
    sty += dt * (c[n] - mean_y);
  }
  if (!(stt > 0.0)) {
    // The decay jumped straight past both points: a single-sample drop.
    throw EstimationError("decay range spans a single sample");
  }
  const double slope = sty / stt;  // dB/s
  if (!(slope < 0.0)) throw EstimationError("energy decay curve is not decaying");
  return -60.0 / slope;
}

double MeasureT60(const AudioBuffer& rir) {
  return T60FromEdc(SchroederEdc(rir), rir.sample_rate());
}

std::vector<double> Convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("cannot convolve an empty sequence");
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<double> out(out_len, 0.0);
  if (std::min(a.size(), b.size()) <= 64) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  int n = 1;
  while (static_cast<std::size_t>(n) < out_len) n *= 2;
  const internal::RealFft fft(n);
  std::vector<double> xa(static_cast<std::size_t>(n), 0.0);
  std::vector<double> xb(static_cast<std::size_t>(n), 0.0);
  std::copy(a.begin(), a.end(), xa.begin());
  std::copy(b.begin(), b.end(), xb.begin());
  std::vector<std::complex<double>> fa(static_cast<std::size_t>(n / 2 + 1));
  std::vector<std::complex<double>> fb(fa.size());
  fft.Forward(xa.data(), fa.data());
  fft.Forward(xb.data(), fb.data());
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.Inverse(fa.data(), xa.data());
  const double scale = 1.0 / n;
  for (std::size_t i = 0; i < out_len; ++i) out[i] = xa[i] * scale;
  return out;
}

AudioBuffer Convolve(const AudioBuffer& signal, const AudioBuffer& rir) {
  if (signal.sample_rate() != rir.sample_rate()) {
    throw InvalidArgument("sample rate mismatch: signal " + std::to_string(signal.sample_rate()) +
                          " Hz, impulse response " + std::to_string(rir.sample_rate()) + " Hz");
  }
  return AudioBuffer(Convolve(signal.samples(), rir.samples()), signal.sample_rate());
}

}  // namespace sddrt
