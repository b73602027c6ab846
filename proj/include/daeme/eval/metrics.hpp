// daeme/eval/metrics.hpp

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

#ifndef DAEME_EVAL_METRICS_HPP_
#define DAEME_EVAL_METRICS_HPP_

#include <string_view>
#include <vector>

#include "daeme/corpus/waveform.hpp"

namespace daeme::eval {

enum class Metric { STOI, SI_SDR, SEG_SNR };

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

/// Short-time objective intelligibility, numerically following the common
/// reference implementation (pystoi): 10 kHz polyphase resampling, removal
/// of frames more than 40 dB below the loudest clean frame, 15 one-third
/// octave bands from 150 Hz, 30-frame envelopes clipped at -15 dB SDR.
/// Throws on a length or rate mismatch, an all-silent clean signal, or when
/// fewer than 30 frames survive silence removal. Result clipped to [0, 1].
double stoi(const corpus::Waveform& clean, const corpus::Waveform& processed);

/// Polyphase resampling by up/down with the Octave-compatible Kaiser
/// design used by the STOI reference. Exposed for testing.
std::vector<double> resample_poly(const std::vector<double>& x, int up, int down);

/// Scale-invariant SDR in dB, clamped to [-60, 60].
double si_sdr(const corpus::Waveform& clean, const corpus::Waveform& processed);

struct SegSnrConfig {
  int frame = 512;  ///< 32 ms at 16 kHz
  int hop = 256;
  double active_range_db = 40.0;  ///< frames this far below the loudest clean frame are skipped
  double lo = -10.0;
  double hi = 35.0;
};

/// Mean of clamped per-frame SNR over active clean frames.
double seg_snr(const corpus::Waveform& clean, const corpus::Waveform& processed, const SegSnrConfig& cfg = {});

double compute_metric(Metric m, const corpus::Waveform& clean, const corpus::Waveform& processed);

struct MetricResult {
  Metric metric = Metric::STOI;
  double value = 0.0;  ///< mean of per_utterance
  std::vector<double> per_utterance;
};

/// Scores utterance i as (clean[i], processed[i]).
MetricResult evaluate(Metric m, const std::vector<const corpus::Waveform*>& clean,
                      const std::vector<const corpus::Waveform*>& processed, int jobs = 1);

}  // namespace daeme::eval

#endif  // DAEME_EVAL_METRICS_HPP_
