// daeme/corpus/waveform.hpp

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

#ifndef DAEME_CORPUS_WAVEFORM_HPP_
#define DAEME_CORPUS_WAVEFORM_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "daeme/common.hpp"

namespace daeme::corpus {

inline constexpr int kDefaultSampleRate = 16000;

/// Mono PCM audio with nominal amplitude range [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

  /// Throws Error unless sample_rate > 0, length > 0 and all samples finite.
  void validate() const;
  /// Throws Error unless the rate is `rate`.
  void require_rate(int rate) const;
};

/// Mean squared amplitude over the whole waveform.
double power(const Waveform& w);
double rms(const Waveform& w);

/// Reads a 16-bit PCM mono RIFF/WAVE file; samples scaled by 1/32768.
Waveform wav_read(const std::filesystem::path& path);

/// Writes 16-bit PCM mono; values clipped to [-1, 1 - 1/32768] first.
void wav_write(const Waveform& wave, const std::filesystem::path& path);

/// The value wav_write would store for `x`, as a 16-bit integer.
std::int16_t quantize_sample(double x);

/// Rounds every sample onto the 16-bit grid that wav_write stores.
Waveform quantized(const Waveform& wave);

}  // namespace daeme::corpus

#endif  // DAEME_CORPUS_WAVEFORM_HPP_
