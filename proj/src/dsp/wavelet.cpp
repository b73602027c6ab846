// dsp/wavelet.cpp

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

#include "daeme/dsp/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace daeme::dsp {

// Standard biorthogonal spline (3, 7) coefficients.
const std::array<double, 16> Bior37::dec_lo = {
    0.0030210861012608843, -0.009063258303782653, -0.01683176542131064, 0.074663985074019,
    0.03133297870736289,   -0.301159125922835,    -0.02649924094534547, 0.9516421218971786,
    0.9516421218971786,    -0.02649924094534547,  -0.301159125922835,   0.03133297870736289,
    0.074663985074019,     -0.01683176542131064,  -0.009063258303782653, 0.0030210861012608843};
const std::array<double, 16> Bior37::dec_hi = {
    0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.1767766952966369, 0.5303300858899106,
    -0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
const std::array<double, 16> Bior37::rec_lo = {
    0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1767766952966369, 0.5303300858899106,
    0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
const std::array<double, 16> Bior37::rec_hi = {
    0.0030210861012608843, 0.009063258303782653, -0.01683176542131064, -0.074663985074019,
    0.03133297870736289,   0.301159125922835,    -0.02649924094534547, -0.9516421218971786,
    0.9516421218971786,    0.02649924094534547,  -0.301159125922835,   -0.03133297870736289,
    0.074663985074019,     0.01683176542131064,  -0.009063258303782653, -0.0030210861012608843};

namespace {

constexpr int kTaps = Bior37::kLength;

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x_{n-1} | x_{n-1} ...
double extended(std::span<const double> x, long k) {
  const long n = static_cast<long>(x.size());
  if (k < 0) k = -1 - k;
  if (k >= n) k = 2 * n - 1 - k;
  return x[static_cast<std::size_t>(k)];
}

std::vector<double> analyze(std::span<const double> x, const std::array<double, kTaps>& h) {
  const std::size_t out_len = wavelet_band_length(x.size());
  std::vector<double> out(out_len);
  for (std::size_t o = 0; o < out_len; ++o) {
    const long i = 2 * static_cast<long>(o) + 1;
    double s = 0.0;
    for (int j = 0; j < kTaps; ++j) s += h[j] * extended(x, i - j);
    out[o] = s;
  }
  return out;
}

// Adds the upsampled-and-filtered band into `out` (length 2n - 14 window of
// the full convolution, starting at offset kTaps - 2).
void synthesize(std::span<const double> c, const std::array<double, kTaps>& g, std::span<double> out) {
  const long n = static_cast<long>(c.size());
  const long len = static_cast<long>(out.size());
  for (long m = 0; m < len; ++m) {
    const long p = m + kTaps - 2;  // position in the full convolution
    double s = 0.0;
    // Upsampled signal is nonzero at even positions 2k; tap index p - 2k.
    long k_lo = std::max(0L, (p - (kTaps - 1) + 1) / 2);
    long k_hi = std::min(n - 1, p / 2);
    for (long k = k_lo; k <= k_hi; ++k) {
      const long tap = p - 2 * k;
      if (tap >= 0 && tap < kTaps) s += c[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(tap)];
    }
    out[static_cast<std::size_t>(m)] += s;
  }
}

}  // namespace

std::size_t wavelet_band_length(std::size_t length) { return (length + kTaps - 1) / 2; }

WaveletBands wavelet_split(const corpus::Waveform& wave) {
  wave.validate();
  if (wave.size() < static_cast<std::size_t>(kTaps))
    throw Error("wavelet_split: input shorter than the filter length (16)");
  WaveletBands b;
  b.approx = analyze(wave.samples, Bior37::dec_lo);
  b.detail = analyze(wave.samples, Bior37::dec_hi);
  b.signal_length = wave.size();
  b.sample_rate = wave.sample_rate;
  return b;
}

corpus::Waveform wavelet_merge(const WaveletBands& bands) {
  if (bands.approx.size() != bands.detail.size()) throw Error("wavelet_merge: band length mismatch");
  const std::size_t n = bands.approx.size();
  if (n * 2 < static_cast<std::size_t>(kTaps)) throw Error("wavelet_merge: bands too short");
  const std::size_t full = 2 * n - kTaps + 2;
  const std::size_t length = bands.signal_length > 0 ? bands.signal_length : full;
  if (length > full || wavelet_band_length(length) != n)
    throw Error("wavelet_merge: band length inconsistent with signal length");
  std::vector<double> rec(full, 0.0);
  synthesize(bands.approx, Bior37::rec_lo, rec);
  synthesize(bands.detail, Bior37::rec_hi, rec);
  rec.resize(length);
  return corpus::Waveform{std::move(rec), bands.sample_rate};
}

BandEnergies wavelet_band_energies(const WaveletBands& bands) {
  auto energy = [](const corpus::Waveform& w) {
    double e = 0.0;
    for (double s : w.samples) e += s * s;
    return e;
  };
  WaveletBands a = bands;
  std::fill(a.detail.begin(), a.detail.end(), 0.0);
  WaveletBands d = bands;
  std::fill(d.approx.begin(), d.approx.end(), 0.0);
  return {energy(wavelet_merge(a)), energy(wavelet_merge(d))};
}

double wavelet_self_test(int trials, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    corpus::Waveform w;
    w.samples.resize(length + static_cast<std::size_t>(t));
    for (double& s : w.samples) s = rng.normal();
    const auto r = wavelet_merge(wavelet_split(w));
    for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(r.samples[i] - w.samples[i]));
  }
  return worst;
}

}  // namespace daeme::dsp
