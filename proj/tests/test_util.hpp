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

// Shared helpers for the unit tests.

#ifndef DAEME_TESTS_TEST_UTIL_HPP_
#define DAEME_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "daeme/common.hpp"
#include "daeme/corpus/waveform.hpp"

namespace daeme::testing {

inline corpus::Waveform random_wave(std::size_t n, std::uint64_t seed, double scale = 0.1) {
  Rng rng(seed);
  corpus::Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = scale * rng.normal();
  return w;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("daeme_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline double snr_db(const std::vector<double>& ref, const std::vector<double>& est,
                     std::size_t begin = 0, std::size_t end = 0) {
  if (end == 0) end = ref.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    num += ref[i] * ref[i];
    den += (ref[i] - est[i]) * (ref[i] - est[i]);
  }
  return 10.0 * std::log10(num / den);
}

}  // namespace daeme::testing

#endif  // DAEME_TESTS_TEST_UTIL_HPP_
