// dsp/fft.cpp

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

#include "daeme/dsp/fft.hpp"

#include <cstring>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "daeme/common.hpp"

namespace daeme::dsp {

struct RealFft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    // Plans live for the whole process; destruction at exit is harmless.
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

namespace {

// FFTW planning is not thread safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(int n) : n_(n) {
  if (n < 2) throw Error("RealFft: size must be at least 2");
  std::lock_guard<std::mutex> lock(planner_mutex());
  static std::map<int, std::shared_ptr<const Plans>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) {
    plans_ = it->second;
    return;
  }
  auto plans = std::make_shared<Plans>();
  std::vector<double> re(n);
  std::vector<Complex> cx(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans->r2c = fftw_plan_dft_r2c_1d(n, re.data(), reinterpret_cast<fftw_complex*>(cx.data()), flags);
  plans->c2r = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cx.data()), re.data(),
                                    flags | FFTW_DESTROY_INPUT);
  if (!plans->r2c || !plans->c2r) throw Error("RealFft: FFTW planning failed");
  cache.emplace(n, plans);
  plans_ = std::move(plans);
}

void RealFft::forward(std::span<const double> in, std::span<Complex> out) const {
  if (static_cast<int>(in.size()) != n_ || static_cast<int>(out.size()) != bins())
    throw Error("RealFft::forward: size mismatch");
  // FFTW does not modify the input of an r2c transform.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (static_cast<int>(in.size()) != bins() || static_cast<int>(out.size()) != n_)
    throw Error("RealFft::inverse: size mismatch");
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / n_;
  for (double& v : out) v *= scale;
}

std::vector<Complex> RealFft::forward(std::span<const double> in) const {
  std::vector<Complex> out(bins());
  forward(in, out);
  return out;
}

std::vector<double> RealFft::inverse(std::span<const Complex> in) const {
  std::vector<double> out(n_);
  inverse(in, out);
  return out;
}

}  // namespace daeme::dsp
