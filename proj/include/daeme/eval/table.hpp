// daeme/eval/table.hpp

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

#ifndef DAEME_EVAL_TABLE_HPP_
#define DAEME_EVAL_TABLE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "daeme/eval/stats.hpp"

namespace daeme::eval {

struct ScoredUtterance {
  std::string noise;
  double snr_db = 0.0;
  double value = 0.0;
};

/// Noise x SNR grid of group means with equal-weight margins over the
/// present cells.
struct ScoreTable {
  std::string metric;
  std::vector<std::string> noises;  ///< rows
  std::vector<double> snrs;         ///< columns
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::optional<double>> row_avg, col_avg;
  std::optional<double> grand_avg;
  std::vector<std::string> warnings;

  /// Present cells in row-major order.
  std::vector<double> cell_values() const;
  /// Header "noise,<snr>...,Avg", one row per noise, then an "Avg" row.
  /// Absent cells are written as "NA". decimals < 0 means full precision.
  std::string to_csv(int decimals = 2) const;
  nlohmann::json to_json() const;
};

/// Rows default to the sorted distinct noises, columns to the distinct SNRs
/// in descending order. Explicit lists fix the layout; groups without
/// utterances become absent cells (recorded in warnings).
ScoreTable make_table(const std::vector<ScoredUtterance>& scores, const std::string& metric = "",
                      const std::vector<std::string>& noises = {}, const std::vector<double>& snrs = {});

/// Paired t-test over the condition cells present in both tables (b vs a).
TTestResult ttest_tables(const ScoreTable& a, const ScoreTable& b, double alpha = 0.01);

}  // namespace daeme::eval

#endif  // DAEME_EVAL_TABLE_HPP_
