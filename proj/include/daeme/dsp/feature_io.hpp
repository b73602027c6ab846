// daeme/dsp/feature_io.hpp

// Copyright 2026  The DAEME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DAEME_DSP_FEATURE_IO_HPP_
#define DAEME_DSP_FEATURE_IO_HPP_

#include <filesystem>

#include "daeme/dsp/stft.hpp"

namespace daeme::dsp {

// Debug dump layout: four little-endian uint32 {T, dims, hop, fft_size}
// followed by T * dims little-endian float32 values, row-major.

void write_feature_dump(const LpsFeatures& lps, const std::filesystem::path& path);

/// sample_rate is not stored and defaults to 16 kHz; signal_length is 0.
LpsFeatures read_feature_dump(const std::filesystem::path& path);

}  // namespace daeme::dsp

#endif  // DAEME_DSP_FEATURE_IO_HPP_
