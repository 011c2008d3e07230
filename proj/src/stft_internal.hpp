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
#ifndef SDDRT_SRC_STFT_INTERNAL_HPP_
#define SDDRT_SRC_STFT_INTERNAL_HPP_

#include "sddrt/stft.hpp"

namespace sddrt::internal {

// Linear-bin spectrogram skeleton with band centers and frame times filled.
BandSpectrogram EmptyLinearSpectrogram(const AudioBuffer& buffer, const StftConfig& cfg,
                                       int bands, int frames);

}  // namespace sddrt::internal

#endif  // SDDRT_SRC_STFT_INTERNAL_HPP_
