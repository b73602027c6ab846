// daeme/corpus/synth.hpp

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

#ifndef DAEME_CORPUS_SYNTH_HPP_
#define DAEME_CORPUS_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "daeme/corpus/waveform.hpp"

namespace daeme::corpus {

/// Two speaker classes with disjoint fundamental-frequency bands; a stand-in
/// for the male/female split.
enum class SpeakerClass { A, B };

std::string_view to_string(SpeakerClass c);
SpeakerClass speaker_class_from_string(std::string_view s);

/// F0 band of a class in Hz: A = [100, 140], B = [190, 230].
struct F0Band {
  double lo;
  double hi;
};
F0Band f0_band(SpeakerClass c);

/// Level every synthesized voice and noise is normalized to.
inline constexpr double kSynthRms = 0.1;

struct VoiceSpec {
  SpeakerClass speaker = SpeakerClass::A;
  double duration_s = 1.0;
  std::uint64_t seed = 0;
  int sample_rate = kDefaultSampleRate;
};

/// Harmonic voice-like signal: class-band F0 with a slow glide, 2-8 Hz
/// amplitude modulation and moving formant emphasis. RMS = 0.1.
/// Duration must lie in [0.5, 10] s.
Waveform synth_voice(const VoiceSpec& spec);

enum class NoiseKind { White, Pink, BabbleProxy, CarProxy };

std::string_view to_string(NoiseKind k);
NoiseKind noise_kind_from_string(std::string_view s);

/// Stationary or quasi-stationary noise, RMS = 0.1, deterministic in seed.
Waveform synth_noise(NoiseKind kind, double duration_s, std::uint64_t seed,
                     int sample_rate = kDefaultSampleRate);

/// Gain g such that 10 log10(P_clean / P_{g*noise}) = snr_db, with powers
/// taken over clean.size() samples of noise starting at `noise_offset`.
double snr_gain(const Waveform& clean, const Waveform& noise, double snr_db,
                std::size_t noise_offset = 0);

/// clean + g * noise[offset, offset + len).
Waveform mix_at_snr(const Waveform& clean, const Waveform& noise, double snr_db,
                    std::size_t noise_offset = 0);

/// 10 log10(P_clean / P_{noisy - clean}).
double measured_snr_db(const Waveform& clean, const Waveform& noisy);

}  // namespace daeme::corpus

#endif  // DAEME_CORPUS_SYNTH_HPP_
