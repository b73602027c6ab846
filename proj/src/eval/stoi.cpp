// eval/stoi.cpp

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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "daeme/common.hpp"
#include "daeme/dsp/fft.hpp"
#include "daeme/eval/metrics.hpp"

namespace daeme::eval {

namespace {

constexpr int kFs = 10000;
constexpr int kFrame = 256;
constexpr int kFft = 512;
constexpr int kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr int kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynRange = 40.0;
const double kEps = std::numeric_limits<double>::epsilon();

// Kaiser-windowed sinc with 60 dB rejection, normalized to unit DC gain.
std::vector<double> resample_window(int p, int q) {
  const double stop = 1.0 / (2.0 * std::max(p, q));
  const double roll_off = stop / 10.0;
  const double rejection_db = 60.0;
  const int L = static_cast<int>(std::ceil((rejection_db - 8.0) / (28.714 * roll_off)));
  const double beta = 0.1102 * (rejection_db - 8.7);
  const int M = 2 * L + 1;
  std::vector<double> h(M);
  const double i0b = std::cyl_bessel_i(0.0, beta);
  double sum = 0.0;
  for (int n = 0; n < M; ++n) {
    const double t = n - L;
    const double arg = 2.0 * stop * t;
    const double sinc = t == 0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    const double r = 2.0 * n / (M - 1) - 1.0;
    const double kaiser = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    h[n] = kaiser * 2.0 * p * stop * sinc;
    sum += h[n];
  }
  for (double& v : h) v /= sum;
  return h;
}

// Hann window without its zero end points.
std::vector<double> hann_inner(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (i + 1) / (n + 1)));
  return w;
}

std::size_t frame_starts(std::size_t len, int frame, int hop) {
  if (len <= static_cast<std::size_t>(frame)) return 0;
  return (len - frame + hop - 1) / hop;  // starts 0, hop, ... strictly below len - frame
}

// Drops frames of x more than `range` dB below its loudest frame and
// overlap-adds the remaining windowed frames of both signals.
void remove_silent_frames(std::vector<double>& x, std::vector<double>& y) {
  const int hop = kFrame / 2;
  const auto w = hann_inner(kFrame);
  const std::size_t K = frame_starts(x.size(), kFrame, hop);
  std::vector<double> energy(K);
  for (std::size_t k = 0; k < K; ++k) {
    double s = 0.0;
    for (int i = 0; i < kFrame; ++i) {
      const double v = w[i] * x[k * hop + i];
      s += v * v;
    }
    energy[k] = 20.0 * std::log10(std::sqrt(s) + kEps);
  }
  const double top = K ? *std::max_element(energy.begin(), energy.end()) : 0.0;
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < K; ++k)
    if (top - kDynRange - energy[k] < 0.0) keep.push_back(k);
  std::vector<double> xs, ys;
  if (!keep.empty()) {
    xs.assign((keep.size() - 1) * hop + kFrame, 0.0);
    ys.assign(xs.size(), 0.0);
    for (std::size_t j = 0; j < keep.size(); ++j)
      for (int i = 0; i < kFrame; ++i) {
        xs[j * hop + i] += w[i] * x[keep[j] * hop + i];
        ys[j * hop + i] += w[i] * y[keep[j] * hop + i];
      }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// 15 x T one-third-octave band magnitudes.
Matrix third_octave(const std::vector<double>& x) {
  static const std::vector<std::pair<int, int>> bands = [] {
    std::vector<std::pair<int, int>> b;
    const int nb = kFft / 2 + 1;
    auto nearest = [&](double f) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int k = 0; k < nb; ++k) {
        const double fk = static_cast<double>(k) * kFs / kFft;
        const double d = (fk - f) * (fk - f);
        if (d < bd) {
          bd = d;
          best = k;
        }
      }
      return best;
    };
    for (int k = 0; k < kBands; ++k)
      b.emplace_back(nearest(kMinFreq * std::pow(2.0, (2.0 * k - 1) / 6.0)),
                     nearest(kMinFreq * std::pow(2.0, (2.0 * k + 1) / 6.0)));
    return b;
  }();
  const int hop = kFrame / 2;
  const auto w = hann_inner(kFrame);
  const std::size_t T = frame_starts(x.size(), kFrame, hop);
  dsp::RealFft fft(kFft);
  std::vector<double> buf(kFft, 0.0);
  std::vector<dsp::Complex> spec(fft.bins());
  Matrix out(kBands, static_cast<Eigen::Index>(T));
  for (std::size_t t = 0; t < T; ++t) {
    for (int i = 0; i < kFrame; ++i) buf[i] = w[i] * x[t * hop + i];
    fft.forward(buf, spec);
    for (int b = 0; b < kBands; ++b) {
      double s = 0.0;
      for (int k = bands[b].first; k < bands[b].second; ++k) s += std::norm(spec[k]);
      out(b, static_cast<Eigen::Index>(t)) = std::sqrt(s);
    }
  }
  return out;
}

}  // namespace

std::vector<double> resample_poly(const std::vector<double>& x, int up, int down) {
  if (up <= 0 || down <= 0) throw Error("resample_poly: factors must be positive");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return x;
  std::vector<double> h = resample_window(up, down);
  const long half = (static_cast<long>(h.size()) - 1) / 2;
  for (double& v : h) v *= up;
  const long pre_pad = down - half % down;
  const long pre_remove = (half + pre_pad) / down;
  const long n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up) / down + ((n_in * up) % down != 0);
  const long hlen = static_cast<long>(h.size());
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  for (long m = 0; m < n_out; ++m) {
    // Full convolution of the zero-stuffed input with the pre-padded filter.
    const long n = (pre_remove + m) * down;
    double s = 0.0;
    const long i_lo = std::max(0L, (n - pre_pad - hlen + 1 + up - 1) / up);
    const long i_hi = std::min(n_in - 1, (n - pre_pad) / up);
    for (long i = i_lo; i <= i_hi; ++i) s += x[i] * h[n - pre_pad - i * up];
    y[m] = s;
  }
  return y;
}

double stoi(const corpus::Waveform& clean, const corpus::Waveform& processed) {
  clean.validate();
  processed.validate();
  if (clean.size() != processed.size()) throw Error("stoi: clean and processed lengths differ");
  if (clean.sample_rate != processed.sample_rate) throw Error("stoi: sample rates differ");
  bool silent = true;
  for (double v : clean.samples)
    if (v != 0.0) {
      silent = false;
      break;
    }
  if (silent) throw Error("stoi: clean signal is all silent");

  std::vector<double> x = clean.samples, y = processed.samples;
  if (clean.sample_rate != kFs) {
    x = resample_poly(x, kFs, clean.sample_rate);
    y = resample_poly(y, kFs, clean.sample_rate);
  }
  remove_silent_frames(x, y);
  const Matrix xt = third_octave(x), yt = third_octave(y);
  const Eigen::Index T = xt.cols();
  if (T < kSegment)
    throw Error("stoi: only " + std::to_string(T) + " frames after silence removal, need " +
                std::to_string(kSegment));

  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  const Eigen::Index J = T - kSegment + 1;
  for (Eigen::Index m = 0; m < J; ++m) {
    for (int b = 0; b < kBands; ++b) {
      Eigen::RowVectorXd xs = xt.row(b).segment(m, kSegment);
      Eigen::RowVectorXd ys = yt.row(b).segment(m, kSegment);
      const double g = xs.norm() / (ys.norm() + kEps);
      Eigen::RowVectorXd yp = (ys * g).cwiseMin(xs * (1.0 + clip));
      yp.array() -= yp.mean();
      xs.array() -= xs.mean();
      yp /= yp.norm() + kEps;
      xs /= xs.norm() + kEps;
      total += yp.dot(xs);
    }
  }
  return std::clamp(total / (static_cast<double>(J) * kBands), 0.0, 1.0);
}

}  // namespace daeme::eval
