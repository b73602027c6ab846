// eval/metrics.cpp

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

#include "daeme/common.hpp"
#include "daeme/eval/metrics.hpp"

namespace daeme::eval {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::STOI: return "stoi";
    case Metric::SI_SDR: return "si_sdr";
    case Metric::SEG_SNR: return "seg_snr";
  }
  return "?";
}

Metric metric_from_string(std::string_view s) {
  if (s == "stoi" || s == "STOI") return Metric::STOI;
  if (s == "si_sdr" || s == "SI_SDR") return Metric::SI_SDR;
  if (s == "seg_snr" || s == "SEG_SNR") return Metric::SEG_SNR;
  throw ConfigError("unknown metric '" + std::string(s) + "'");
}

namespace {

void check_pair(const corpus::Waveform& a, const corpus::Waveform& b, const char* who) {
  a.validate();
  b.validate();
  if (a.size() != b.size()) throw Error(std::string(who) + ": clean and processed lengths differ");
  if (a.sample_rate != b.sample_rate) throw Error(std::string(who) + ": sample rates differ");
}

}  // namespace

double si_sdr(const corpus::Waveform& clean, const corpus::Waveform& processed) {
  check_pair(clean, processed, "si_sdr");
  double xx = 0.0, xy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    xx += clean.samples[i] * clean.samples[i];
    xy += clean.samples[i] * processed.samples[i];
    yy += processed.samples[i] * processed.samples[i];
  }
  if (xx == 0.0 || yy == 0.0) throw Error("si_sdr: zero-energy input");
  const double a = xy / xx;
  double target = 0.0, resid = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double t = a * clean.samples[i];
    const double r = processed.samples[i] - t;
    target += t * t;
    resid += r * r;
  }
  if (resid == 0.0) return 60.0;
  if (target == 0.0) return -60.0;
  return std::clamp(10.0 * std::log10(target / resid), -60.0, 60.0);
}

double seg_snr(const corpus::Waveform& clean, const corpus::Waveform& processed, const SegSnrConfig& cfg) {
  check_pair(clean, processed, "seg_snr");
  if (cfg.frame <= 0 || cfg.hop <= 0) throw ConfigError("seg_snr: frame and hop must be positive");
  const std::size_t n = clean.size(), F = static_cast<std::size_t>(cfg.frame);
  // A signal shorter than one frame is scored as a single frame.
  const std::size_t count = n <= F ? 1 : 1 + (n - F) / cfg.hop;
  std::vector<double> sig(count), err(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t b = k * cfg.hop, e = std::min(n, b + F);
    double s = 0.0, d = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      s += clean.samples[i] * clean.samples[i];
      const double r = clean.samples[i] - processed.samples[i];
      d += r * r;
    }
    sig[k] = s;
    err[k] = d;
  }
  const double top = *std::max_element(sig.begin(), sig.end());
  if (top <= 0.0) throw Error("seg_snr: no active frames");
  const double gate = top * std::pow(10.0, -cfg.active_range_db / 10.0);
  double sum = 0.0;
  int active = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (sig[k] <= 0.0 || sig[k] < gate) continue;
    const double v = err[k] == 0.0 ? cfg.hi : 10.0 * std::log10(sig[k] / err[k]);
    sum += std::clamp(v, cfg.lo, cfg.hi);
    ++active;
  }
  return sum / active;
}

double compute_metric(Metric m, const corpus::Waveform& clean, const corpus::Waveform& processed) {
  switch (m) {
    case Metric::STOI: return stoi(clean, processed);
    case Metric::SI_SDR: return si_sdr(clean, processed);
    case Metric::SEG_SNR: return seg_snr(clean, processed);
  }
  throw Error("unknown metric");
}

MetricResult evaluate(Metric m, const std::vector<const corpus::Waveform*>& clean,
                      const std::vector<const corpus::Waveform*>& processed, int jobs) {
  if (clean.size() != processed.size()) throw Error("evaluate: clean and processed lists differ in length");
  if (clean.empty()) throw Error("evaluate: no utterances");
  MetricResult r;
  r.metric = m;
  r.per_utterance.resize(clean.size());
  parallel_for(clean.size(), jobs, [&](std::size_t i) { r.per_utterance[i] = compute_metric(m, *clean[i], *processed[i]); });
  double s = 0.0;
  for (double v : r.per_utterance) s += v;
  r.value = s / static_cast<double>(r.per_utterance.size());
  return r;
}

}  // namespace daeme::eval
