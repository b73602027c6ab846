// daeme/eval/stats.hpp

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

#ifndef DAEME_EVAL_STATS_HPP_
#define DAEME_EVAL_STATS_HPP_

#include <vector>

#include "json.hpp"

namespace daeme::eval {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  ///< one-sided, H1: mean(b - a) > 0
  int n = 0;
  double mean_diff = 0.0;
  bool significant = false;  ///< p < alpha

  nlohmann::json to_json() const;
};

/// Dependent t-test on d = b - a with df = n - 1.
/// Zero variance: p = 0 for a positive mean, 1 for a negative one and 0.5
/// when every difference is zero.
TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b, double alpha = 0.01);

}  // namespace daeme::eval

#endif  // DAEME_EVAL_STATS_HPP_
