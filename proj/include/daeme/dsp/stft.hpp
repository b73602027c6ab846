// daeme/dsp/stft.hpp

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

#ifndef DAEME_DSP_STFT_HPP_
#define DAEME_DSP_STFT_HPP_

#include <utility>
#include <vector>

#include "daeme/common.hpp"
#include "daeme/corpus/waveform.hpp"

namespace daeme::dsp {

/// Framing parameters. The defaults are the 16 kHz front end: 512-point
/// FFT, 512-sample (32 ms) Hamming window, 256-sample (16 ms) hop.
struct StftConfig {
  int fft_size = 512;
  int hop = 256;
  int sample_rate = 16000;
  double floor = 1e-12;  ///< power floor before the natural log

  int bins() const { return fft_size / 2 + 1; }
};

/// T x (fft_size/2 + 1) natural-log power spectra.
struct LpsFeatures {
  Matrix frames;
  int hop = 256;
  int fft_size = 512;
  int sample_rate = 16000;
  /// Length of the analyzed waveform, used to trim resynthesis. 0 = unknown.
  std::size_t signal_length = 0;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dims() const { return frames.cols(); }
};

/// Phase angles in (-pi, pi], same shape as the companion LpsFeatures.
struct PhaseMatrix {
  Matrix frames;
};

/// Symmetric Hamming window of length n.
std::vector<double> hamming(int n);

/// Number of frames stft_analyze produces for `length` samples.
Eigen::Index stft_frame_count(std::size_t length, const StftConfig& cfg = {});

/// Centered analysis: the signal is zero-padded by fft_size/2 on both sides
/// (and at the end up to a whole hop), so every sample is covered by
/// fft_size/hop frames.
std::pair<LpsFeatures, PhaseMatrix> stft_analyze(const corpus::Waveform& wave, const StftConfig& cfg = {});

/// Inverse FFT of exp(lps/2) * e^{i phase} followed by weighted overlap-add
/// with window-squared normalization.
corpus::Waveform stft_synthesize(const LpsFeatures& lps, const PhaseMatrix& phase);

}  // namespace daeme::dsp

#endif  // DAEME_DSP_STFT_HPP_
