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
#include "fft.hpp"

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "sddrt/error.hpp"

namespace sddrt::internal {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// Plans live for the life of the process.
PlanPair GetPlans(int n) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> real(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(n / 2 + 1));
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair plans{fftw_plan_dft_r2c_1d(n, real.data(), c, kFlags),
                 fftw_plan_dft_c2r_1d(n, c, real.data(), kFlags)};
  if (plans.forward == nullptr || plans.inverse == nullptr) {
    throw Error("FFTW planning failed for size " + std::to_string(n));
  }
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(int n) : n_(n) {
  if (n <= 0) throw InvalidArgument("FFT size must be positive");
  const PlanPair plans = GetPlans(n);
  forward_ = plans.forward;
  inverse_ = plans.inverse;
}

void RealFft::Forward(double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(forward_, in, reinterpret_cast<fftw_complex*>(out));
}

void RealFft::Inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace sddrt::internal
