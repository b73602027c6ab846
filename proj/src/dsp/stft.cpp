// dsp/stft.cpp

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

#include "daeme/dsp/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "daeme/dsp/fft.hpp"

namespace daeme::dsp {

std::vector<double> hamming(int n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int i = 0; i < n; ++i) w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  return w;
}

namespace {

void check_config(const StftConfig& cfg) {
  if (cfg.fft_size < 2 || cfg.fft_size % 2 != 0) throw Error("stft: fft size must be even and >= 2");
  if (cfg.hop < 1 || cfg.hop > cfg.fft_size) throw Error("stft: hop must lie in [1, fft_size]");
  if (!(cfg.floor > 0.0)) throw Error("stft: floor must be positive");
}

}  // namespace

Eigen::Index stft_frame_count(std::size_t length, const StftConfig& cfg) {
  return 1 + static_cast<Eigen::Index>((length + cfg.hop - 1) / cfg.hop);
}

std::pair<LpsFeatures, PhaseMatrix> stft_analyze(const corpus::Waveform& wave, const StftConfig& cfg) {
  check_config(cfg);
  wave.validate();
  wave.require_rate(cfg.sample_rate);
  if (wave.size() < static_cast<std::size_t>(cfg.fft_size))
    throw Error("stft_analyze: waveform shorter than one window (" + std::to_string(cfg.fft_size) +
                " samples)");

  const int n = cfg.fft_size;
  const int half = n / 2;
  const Eigen::Index frames = stft_frame_count(wave.size(), cfg);
  const std::size_t padded = static_cast<std::size_t>((frames - 1) * cfg.hop + n);
  std::vector<double> x(padded, 0.0);
  std::copy(wave.samples.begin(), wave.samples.end(), x.begin() + half);

  const auto window = hamming(n);
  const RealFft fft(n);
  LpsFeatures lps;
  lps.frames.resize(frames, cfg.bins());
  lps.hop = cfg.hop;
  lps.fft_size = n;
  lps.sample_rate = cfg.sample_rate;
  lps.signal_length = wave.size();
  PhaseMatrix phase;
  phase.frames.resize(frames, cfg.bins());

  std::vector<double> buf(n);
  std::vector<Complex> spec(cfg.bins());
  for (Eigen::Index t = 0; t < frames; ++t) {
    const std::size_t start = static_cast<std::size_t>(t * cfg.hop);
    for (int i = 0; i < n; ++i) buf[i] = window[i] * x[start + i];
    fft.forward(buf, spec);
    for (int k = 0; k < cfg.bins(); ++k) {
      lps.frames(t, k) = std::log(std::max(std::norm(spec[k]), cfg.floor));
      const double a = std::arg(spec[k]);
      phase.frames(t, k) = a <= -std::numbers::pi ? std::numbers::pi : a;
    }
  }
  return {std::move(lps), std::move(phase)};
}

corpus::Waveform stft_synthesize(const LpsFeatures& lps, const PhaseMatrix& phase) {
  if (lps.frames.rows() != phase.frames.rows() || lps.frames.cols() != phase.frames.cols())
    throw Error("stft_synthesize: LPS/phase shape mismatch");
  const int n = lps.fft_size;
  if (lps.frames.cols() != n / 2 + 1) throw Error("stft_synthesize: LPS width does not match fft size");
  if (lps.frames.rows() < 1) throw Error("stft_synthesize: no frames");
  const int half = n / 2;
  const Eigen::Index frames = lps.frames.rows();
  const std::size_t padded = static_cast<std::size_t>((frames - 1) * lps.hop + n);

  const auto window = hamming(n);
  const RealFft fft(n);
  std::vector<double> acc(padded, 0.0);
  std::vector<double> wsum(padded, 0.0);
  std::vector<Complex> spec(n / 2 + 1);
  std::vector<double> buf(n);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int k = 0; k <= half; ++k) {
      const double mag = std::exp(0.5 * lps.frames(t, k));
      if (!std::isfinite(mag)) throw Error("stft_synthesize: non-finite magnitude");
      spec[k] = std::polar(mag, phase.frames(t, k));
    }
    // A real signal has real DC and Nyquist bins.
    spec[0] = Complex(spec[0].real(), 0.0);
    spec[half] = Complex(spec[half].real(), 0.0);
    fft.inverse(spec, buf);
    const std::size_t start = static_cast<std::size_t>(t * lps.hop);
    for (int i = 0; i < n; ++i) {
      acc[start + i] += window[i] * buf[i];
      wsum[start + i] += window[i] * window[i];
    }
  }

  const std::size_t length =
      lps.signal_length > 0 ? lps.signal_length : static_cast<std::size_t>((frames - 1) * lps.hop);
  if (length + half > padded) throw Error("stft_synthesize: signal length exceeds frame coverage");
  corpus::Waveform out;
  out.sample_rate = lps.sample_rate;
  out.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double w = wsum[i + half];
    out.samples[i] = w > 1e-10 ? acc[i + half] / w : 0.0;
  }
  return out;
}

}  // namespace daeme::dsp
