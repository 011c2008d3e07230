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
#ifndef SDDRT_SRC_FFT_HPP_
#define SDDRT_SRC_FFT_HPP_

#include <complex>

#include <fftw3.h>

namespace sddrt::internal {

// Thin wrapper over cached FFTW plans. Planning is serialized; execution
// uses the new-array interface and is safe from multiple threads.
class RealFft {
 public:
  explicit RealFft(int n);

  int size() const { return n_; }

  // in: n reals, out: n / 2 + 1 complex bins.
  void Forward(double* in, std::complex<double>* out) const;
  // in: n / 2 + 1 complex bins (destroyed), out: n reals, unnormalized.
  void Inverse(std::complex<double>* in, double* out) const;

 private:
  int n_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace sddrt::internal

#endif  // SDDRT_SRC_FFT_HPP_
