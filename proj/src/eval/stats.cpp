// eval/stats.cpp

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

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "daeme/common.hpp"
#include "daeme/eval/stats.hpp"

namespace daeme::eval {

nlohmann::json TTestResult::to_json() const {
  // JSON has no infinities; report them as strings.
  nlohmann::json jt = std::isfinite(t) ? nlohmann::json(t) : nlohmann::json(t > 0 ? "inf" : "-inf");
  return {{"t", jt}, {"p", p}, {"n", n}, {"mean_diff", mean_diff}, {"significant", significant}};
}

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b, double alpha) {
  if (a.size() != b.size()) throw Error("paired_ttest: score lists differ in length");
  if (a.size() < 2) throw Error("paired_ttest: need at least 2 pairs");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw Error("paired_ttest: non-finite score");
    mean += b[i] - a[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = b[i] - a[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  TTestResult r;
  r.n = static_cast<int>(n);
  r.mean_diff = mean;
  if (sd == 0.0) {
    if (mean > 0.0) {
      r.t = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    } else if (mean < 0.0) {
      r.t = -std::numeric_limits<double>::infinity();
      r.p = 1.0;
    } else {
      r.t = 0.0;
      r.p = 0.5;
    }
  } else {
    r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    boost::math::students_t dist(static_cast<double>(n - 1));
    r.p = boost::math::cdf(boost::math::complement(dist, r.t));
  }
  r.significant = r.p < alpha;
  return r;
}

}  // namespace daeme::eval
