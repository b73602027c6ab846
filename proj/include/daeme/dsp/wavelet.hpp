// daeme/dsp/wavelet.hpp

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

#ifndef DAEME_DSP_WAVELET_HPP_
#define DAEME_DSP_WAVELET_HPP_

#include <array>
#include <span>
#include <vector>

#include "daeme/corpus/waveform.hpp"

namespace daeme::dsp {

/// Biorthogonal 3.7 filter quadruple (16 taps each).
struct Bior37 {
  static constexpr int kLength = 16;
  static const std::array<double, kLength> dec_lo;
  static const std::array<double, kLength> dec_hi;
  static const std::array<double, kLength> rec_lo;
  static const std::array<double, kLength> rec_hi;
};

/// One-level DWT of a waveform. Each band holds floor((N + 15) / 2)
/// coefficients at half the input rate.
struct WaveletBands {
  std::vector<double> approx;
  std::vector<double> detail;
  std::size_t signal_length = 0;
  int sample_rate = 16000;  ///< rate of the analyzed waveform
};

/// Analysis with half-sample symmetric extension and downsampling by 2.
WaveletBands wavelet_split(const corpus::Waveform& wave);

/// Upsampling, synthesis filtering and summation; exact inverse of
/// wavelet_split (no residual delay).
corpus::Waveform wavelet_merge(const WaveletBands& bands);

/// Energy of each band's contribution to the reconstructed signal, i.e. of
/// wavelet_merge with the other band zeroed.
struct BandEnergies {
  double approx = 0.0;
  double detail = 0.0;
};
BandEnergies wavelet_band_energies(const WaveletBands& bands);

/// Coefficient count per band for an input of `length` samples.
std::size_t wavelet_band_length(std::size_t length);

/// Largest reconstruction error over a set of random signals; used as a
/// self-test of the stored filter constants.
double wavelet_self_test(int trials = 4, std::size_t length = 1000, std::uint64_t seed = 7);

}  // namespace daeme::dsp

#endif  // DAEME_DSP_WAVELET_HPP_
