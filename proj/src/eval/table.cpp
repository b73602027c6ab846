// eval/table.cpp

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
#include <cstdio>
#include <map>
#include <set>

#include "daeme/common.hpp"
#include "daeme/eval/table.hpp"

namespace daeme::eval {

namespace {

std::string fmt(double v, int decimals) {
  char buf[64];
  if (decimals < 0)
    std::snprintf(buf, sizeof buf, "%.17g", v);
  else
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string fmt_snr(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

std::string cell(const std::optional<double>& v, int decimals) { return v ? fmt(*v, decimals) : "NA"; }

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> ScoreTable::cell_values() const {
  std::vector<double> out;
  for (const auto& row : cells)
    for (const auto& c : row)
      if (c) out.push_back(*c);
  return out;
}

std::string ScoreTable::to_csv(int decimals) const {
  std::string s = "noise";
  for (double snr : snrs) s += "," + fmt_snr(snr);
  s += ",Avg\n";
  for (std::size_t r = 0; r < noises.size(); ++r) {
    s += noises[r];
    for (const auto& c : cells[r]) s += "," + cell(c, decimals);
    s += "," + cell(row_avg[r], decimals) + "\n";
  }
  s += "Avg";
  for (const auto& c : col_avg) s += "," + cell(c, decimals);
  s += "," + cell(grand_avg, decimals) + "\n";
  return s;
}

nlohmann::json ScoreTable::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json jc = nlohmann::json::array();
  for (const auto& row : cells) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& c : row) jr.push_back(opt(c));
    jc.push_back(jr);
  }
  nlohmann::json jra = nlohmann::json::array(), jca = nlohmann::json::array();
  for (const auto& v : row_avg) jra.push_back(opt(v));
  for (const auto& v : col_avg) jca.push_back(opt(v));
  return {{"metric", metric}, {"noises", noises},   {"snrs", snrs},          {"cells", jc},
          {"row_avg", jra},  {"col_avg", jca}, {"grand_avg", opt(grand_avg)}, {"warnings", warnings}};
}

ScoreTable make_table(const std::vector<ScoredUtterance>& scores, const std::string& metric,
                      const std::vector<std::string>& noises, const std::vector<double>& snrs) {
  ScoreTable t;
  t.metric = metric;
  if (noises.empty()) {
    std::set<std::string> s;
    for (const auto& u : scores) s.insert(u.noise);
    t.noises.assign(s.begin(), s.end());
  } else {
    t.noises = noises;
  }
  if (snrs.empty()) {
    std::set<double, std::greater<>> s;
    for (const auto& u : scores) s.insert(u.snr_db);
    t.snrs.assign(s.begin(), s.end());
  } else {
    t.snrs = snrs;
  }
  if (t.noises.empty() || t.snrs.empty()) throw Error("make_table: no scores");

  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> groups;
  for (const auto& u : scores) {
    auto r = std::find(t.noises.begin(), t.noises.end(), u.noise);
    auto c = std::find(t.snrs.begin(), t.snrs.end(), u.snr_db);
    if (r == t.noises.end() || c == t.snrs.end())
      throw Error("make_table: utterance group (" + u.noise + ", " + fmt_snr(u.snr_db) + " dB) is outside the layout");
    groups[{static_cast<std::size_t>(r - t.noises.begin()), static_cast<std::size_t>(c - t.snrs.begin())}].push_back(
        u.value);
  }

  const std::size_t R = t.noises.size(), C = t.snrs.size();
  t.cells.assign(R, std::vector<std::optional<double>>(C));
  std::vector<std::vector<double>> rows(R), cols(C);
  std::vector<double> all;
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c) {
      auto it = groups.find({r, c});
      if (it == groups.end()) {
        t.warnings.push_back("empty group (" + t.noises[r] + ", " + fmt_snr(t.snrs[c]) + " dB) excluded from margins");
        continue;
      }
      // Sorted so the mean does not depend on utterance order.
      std::sort(it->second.begin(), it->second.end());
      const double v = *mean_of(it->second);
      t.cells[r][c] = v;
      rows[r].push_back(v);
      cols[c].push_back(v);
      all.push_back(v);
    }
  for (const auto& v : rows) t.row_avg.push_back(mean_of(v));
  for (const auto& v : cols) t.col_avg.push_back(mean_of(v));
  t.grand_avg = mean_of(all);
  return t;
}

TTestResult ttest_tables(const ScoreTable& a, const ScoreTable& b, double alpha) {
  std::vector<double> va, vb;
  for (std::size_t r = 0; r < a.noises.size(); ++r) {
    auto rb = std::find(b.noises.begin(), b.noises.end(), a.noises[r]);
    if (rb == b.noises.end()) continue;
    const auto ib = static_cast<std::size_t>(rb - b.noises.begin());
    for (std::size_t c = 0; c < a.snrs.size(); ++c) {
      auto cb = std::find(b.snrs.begin(), b.snrs.end(), a.snrs[c]);
      if (cb == b.snrs.end()) continue;
      const auto& x = a.cells[r][c];
      const auto& y = b.cells[ib][static_cast<std::size_t>(cb - b.snrs.begin())];
      if (x && y) {
        va.push_back(*x);
        vb.push_back(*y);
      }
    }
  }
  return paired_ttest(va, vb, alpha);
}

}  // namespace daeme::eval
