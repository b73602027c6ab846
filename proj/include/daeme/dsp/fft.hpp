// daeme/dsp/fft.hpp

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

#ifndef DAEME_DSP_FFT_HPP_
#define DAEME_DSP_FFT_HPP_

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace daeme::dsp {

using Complex = std::complex<double>;

/// Real-input FFT of a fixed length backed by FFTW. Plans are created once
/// per length and shared; execution is reentrant.
class RealFft {
 public:
  explicit RealFft(int n);

  int size() const { return n_; }
  int bins() const { return n_ / 2 + 1; }

  /// `in` has size() samples, `out` has bins() values.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse of forward(), including the 1/n normalization.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

  std::vector<Complex> forward(std::span<const double> in) const;
  std::vector<double> inverse(std::span<const Complex> in) const;

 private:
  struct Plans;
  int n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace daeme::dsp

#endif  // DAEME_DSP_FFT_HPP_
