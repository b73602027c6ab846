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

// Metrics, significance testing and score tables.

#include <cmath>
#include <numbers>

#include "doctest.h"

#include "daeme/corpus/synth.hpp"
#include "daeme/eval/metrics.hpp"
#include "daeme/eval/stats.hpp"
#include "daeme/eval/table.hpp"
#include "test_util.hpp"

using namespace daeme;
using namespace daeme::eval;
using corpus::Waveform;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form signals reproduced verbatim in the Python oracle script.
Waveform oracle_clean() {
  Waveform w;
  const int fs = 16000;
  w.samples.resize(static_cast<std::size_t>(2.5 * fs));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double n = static_cast<double>(i);
    w.samples[i] = std::sin(2 * kPi * 220 * n / fs) * (0.5 + 0.5 * std::sin(2 * kPi * 3 * n / fs)) +
                   0.3 * std::sin(2 * kPi * 1250 * n / fs + 0.001 * n * n / fs);
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(0.3 * fs); ++i) w.samples[i] = 0.0;
  return w;
}

Waveform oracle_interference() {
  Waveform w;
  const int fs = 16000;
  w.samples.resize(static_cast<std::size_t>(2.5 * fs));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double n = static_cast<double>(i);
    w.samples[i] = 0.5 * std::sin(2 * kPi * 3001 * n / fs + 0.7) * std::cos(2 * kPi * 17 * n / fs) +
                   0.2 * std::sin(2 * kPi * 450 * n / fs);
  }
  return w;
}

Waveform axpy(double a, const Waveform& x, double b, const Waveform& y) {
  Waveform out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out.samples[i] = a * x.samples[i] + b * y.samples[i];
  return out;
}

Waveform voice(std::uint64_t seed, double dur = 3.0) {
  return corpus::synth_voice({seed % 2 ? corpus::SpeakerClass::A : corpus::SpeakerClass::B, dur, seed});
}

// Regularized incomplete beta by Lentz's continued fraction, written
// independently of the library's t distribution.
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + aa * d;
    c = 1.0 + aa / c;
    if (std::abs(d) < tiny) d = tiny;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + aa * d;
    c = 1.0 + aa / c;
    if (std::abs(d) < tiny) d = tiny;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

double inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(lbt) * betacf(a, b, x) / a;
  return 1.0 - std::exp(lbt) * betacf(b, a, 1.0 - x) / b;
}

// One-sided upper tail of Student's t.
double t_upper(double t, double df) {
  const double tail = 0.5 * inc_beta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0 ? tail : 1.0 - tail;
}

}  // namespace

TEST_CASE("STOI matches frozen pystoi values") {
  const Waveform x = oracle_clean(), v = oracle_interference();
  // pystoi 0.4 / scipy resample_poly on the closed-form signals above.
  CHECK(stoi(x, axpy(1.0, x, 1.0, v)) == doctest::Approx(0.6225597275808865).epsilon(1e-6));
  CHECK(stoi(x, axpy(1.0, x, 0.3, v)) == doctest::Approx(0.731273244426455).epsilon(1e-6));
  CHECK(stoi(x, axpy(0.5, x, 0.05, v)) == doctest::Approx(0.8086747221655703).epsilon(1e-6));

  const auto r = resample_poly(x.samples, 10000, 16000);
  REQUIRE(r.size() == 25000);
  CHECK(r[5000] == doctest::Approx(-0.22705802650771448).epsilon(1e-10));
  CHECK(r[12345] == doctest::Approx(-0.0004060180028105009).epsilon(1e-8));
  CHECK(r.back() == doctest::Approx(-0.3659965660494633).epsilon(1e-10));
}

TEST_CASE("STOI sanity on synthetic speech") {
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const Waveform x = voice(s);
    CHECK(stoi(x, x) >= 0.99);
    CHECK(stoi(x, x) <= 1.0);
  }
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Waveform x = voice(100 + s);
    const Waveform n = corpus::synth_noise(corpus::NoiseKind::White, 3.0, 200 + s);
    CHECK(stoi(x, n) <= 0.30);
  }
}

TEST_CASE("STOI is non-decreasing in SNR") {
  for (auto kind : {corpus::NoiseKind::White, corpus::NoiseKind::Pink, corpus::NoiseKind::BabbleProxy,
                    corpus::NoiseKind::CarProxy}) {
    const Waveform x = voice(7);
    const Waveform n = corpus::synth_noise(kind, 3.0, 9);
    std::vector<double> scores;
    for (double snr : {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0}) scores.push_back(stoi(x, corpus::mix_at_snr(x, n, snr)));
    int inversions = 0;
    bool small = true;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] < scores[i - 1]) {
        ++inversions;
        small = small && scores[i - 1] - scores[i] <= 0.01;
      }
    CHECK(inversions <= 1);
    CHECK(small);
  }
}

TEST_CASE("STOI is invariant to the processed signal's gain") {
  const Waveform x = voice(11);
  const Waveform y = corpus::mix_at_snr(x, corpus::synth_noise(corpus::NoiseKind::Pink, 3.0, 4), 0.0);
  const double ref = stoi(x, y);
  for (double g : {0.1, 0.5, 2.0, 10.0}) CHECK(std::abs(stoi(x, axpy(g, y, 0.0, y)) - ref) <= 1e-6);
}

TEST_CASE("STOI rejects invalid inputs") {
  const Waveform x = voice(1);
  Waveform shorter = x;
  shorter.samples.pop_back();
  CHECK_THROWS_AS(stoi(x, shorter), Error);
  Waveform silent = x;
  std::fill(silent.samples.begin(), silent.samples.end(), 0.0);
  CHECK_THROWS_WITH_AS(stoi(silent, x), doctest::Contains("silent"), Error);
  Waveform tiny = voice(2, 0.5);
  tiny.samples.resize(3000);
  CHECK_THROWS_WITH_AS(stoi(tiny, tiny), doctest::Contains("frames"), Error);
  Waveform other = x;
  other.sample_rate = 8000;
  CHECK_THROWS_AS(stoi(x, other), Error);
}

TEST_CASE("SI-SDR") {
  const Waveform x = testing::random_wave(4000, 1);
  CHECK(si_sdr(x, x) == 60.0);
  CHECK(si_sdr(x, axpy(2.0, x, 0.0, x)) == 60.0);

  // Gram-Schmidt: n orthogonal to x with equal norm.
  Waveform n = testing::random_wave(4000, 2);
  double xx = 0.0, xn = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x.samples[i] * x.samples[i];
    xn += x.samples[i] * n.samples[i];
  }
  double nn = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    n.samples[i] -= xn / xx * x.samples[i];
    nn += n.samples[i] * n.samples[i];
  }
  for (double& s : n.samples) s *= std::sqrt(xx / nn);
  CHECK(si_sdr(x, axpy(1.0, x, 1.0, n)) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));

  Waveform zero = x;
  std::fill(zero.samples.begin(), zero.samples.end(), 0.0);
  CHECK_THROWS_AS(si_sdr(zero, x), Error);
  CHECK_THROWS_AS(si_sdr(x, zero), Error);
}

TEST_CASE("segmental SNR") {
  const Waveform x = voice(3);
  CHECK(seg_snr(x, x) == 35.0);
  Waveform zero = x;
  std::fill(zero.samples.begin(), zero.samples.end(), 0.0);
  // A zero output has error power equal to the clean power: 0 dB per frame.
  CHECK(seg_snr(x, zero) == 0.0);
  // Far worse than silence reaches the lower clamp.
  CHECK(seg_snr(x, axpy(-9.0, x, 0.0, x)) == -10.0);

  // Single frame whose clean power is 4x the error power.
  Waveform c, p;
  c.samples.assign(512, 0.0);
  for (std::size_t i = 0; i < 512; ++i) c.samples[i] = std::sin(0.05 * static_cast<double>(i)) + 0.1;
  p = axpy(0.5, c, 0.0, c);
  CHECK(seg_snr(c, p) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
  CHECK(seg_snr(c, p) == doctest::Approx(6.0206).epsilon(1e-4));

  CHECK_THROWS_AS(seg_snr(zero, x), Error);
}

TEST_CASE("paired t-test") {
  SUBCASE("oracle agreement") {
    const std::vector<double> a(5, 0.0), b{1.0, 0.8, 1.2, 0.9, 1.1};
    const auto r = paired_ttest(a, b);
    CHECK(r.n == 5);
    CHECK(r.t == doctest::Approx(14.142135623730951).epsilon(1e-9));
    CHECK(std::abs(r.p - t_upper(r.t, 4)) <= 1e-6);
    CHECK(r.p == doctest::Approx(7.256408530659874e-05).epsilon(1e-6));
    CHECK(r.significant);

    const std::vector<double> a2(7, 0.5), b2{0.8, 0.4, 0.75, 0.55, 0.48, 0.9, 0.6};
    const auto r2 = paired_ttest(a2, b2);
    CHECK(r2.t == doctest::Approx(2.0379844022500095).epsilon(1e-9));
    CHECK(std::abs(r2.p - t_upper(r2.t, 6)) <= 1e-6);
    CHECK(r2.p == doctest::Approx(0.04384440178412869).epsilon(1e-6));
    CHECK_FALSE(r2.significant);
  }
  SUBCASE("degenerate cases") {
    std::vector<double> a(24, 0.2), b(24, 1.2);
    auto r = paired_ttest(a, b);
    CHECK(r.p == 0.0);
    CHECK(r.significant);
    r = paired_ttest(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p == 0.5);
    CHECK_FALSE(r.significant);
    CHECK_THROWS_AS(paired_ttest({1.0}, {2.0}), Error);
    CHECK_THROWS_AS(paired_ttest({1.0, 2.0}, {2.0}), Error);
  }
  SUBCASE("swapping the arguments negates t and reflects p") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a(10), b(10);
      for (int i = 0; i < 10; ++i) {
        a[i] = rng.normal();
        b[i] = a[i] + 0.3 * rng.normal() + 0.1;
      }
      const auto ab = paired_ttest(a, b), ba = paired_ttest(b, a);
      CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
      CHECK(ab.p + ba.p == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("score tables") {
  SUBCASE("hand-built 2x2 grid") {
    std::vector<ScoredUtterance> s{{"car", 5, 0.2}, {"car", 0, 0.4}, {"pink", 5, 0.6}, {"pink", 0, 0.8}};
    const auto t = make_table(s, "stoi");
    REQUIRE(t.noises == std::vector<std::string>{"car", "pink"});
    REQUIRE(t.snrs == std::vector<double>{5, 0});
    CHECK(*t.row_avg[0] == doctest::Approx(0.3));
    CHECK(*t.row_avg[1] == doctest::Approx(0.7));
    CHECK(*t.col_avg[0] == doctest::Approx(0.4));
    CHECK(*t.col_avg[1] == doctest::Approx(0.6));
    CHECK(*t.grand_avg == doctest::Approx(0.5));
    CHECK(t.to_csv() == "noise,5,0,Avg\ncar,0.20,0.40,0.30\npink,0.60,0.80,0.70\nAvg,0.40,0.60,0.50\n");
    CHECK(t.to_csv(-1).find("0.20000000000000001") != std::string::npos);
  }
  SUBCASE("uniform scores and a single group") {
    std::vector<ScoredUtterance> s;
    for (const char* n : {"a", "b", "c"})
      for (double snr : {15, 10, 5, 0, -5, -10})
        for (int k = 0; k < 3; ++k) s.push_back({n, snr, 0.5});
    const auto t = make_table(s);
    for (const auto& row : t.cells)
      for (const auto& c : row) CHECK(*c == 0.5);
    for (const auto& v : t.row_avg) CHECK(*v == 0.5);
    for (const auto& v : t.col_avg) CHECK(*v == 0.5);
    CHECK(*t.grand_avg == 0.5);
    CHECK(t.snrs == std::vector<double>{15, 10, 5, 0, -5, -10});

    const auto one = make_table({{"x", 3, 0.25}, {"x", 3, 0.75}});
    CHECK(one.cells.size() == 1);
    CHECK(*one.grand_avg == *one.cells[0][0]);
    CHECK(*one.grand_avg == 0.5);
  }
  SUBCASE("margins recompute exactly from cells and input order does not matter") {
    Rng rng(9);
    std::vector<ScoredUtterance> s;
    for (int i = 0; i < 200; ++i)
      s.push_back({std::string(1, static_cast<char>('a' + rng.index(4))), -10.0 + 5.0 * rng.index(6), rng.uniform()});
    const auto t = make_table(s);
    const auto cells = t.cell_values();
    double sum = 0.0;
    for (double v : cells) sum += v;
    CHECK(*t.grand_avg == doctest::Approx(sum / cells.size()).epsilon(1e-15));
    std::vector<ScoredUtterance> rev(s.rbegin(), s.rend());
    CHECK(make_table(rev).to_csv(-1) == t.to_csv(-1));
  }
  SUBCASE("empty groups are absent and excluded") {
    const auto t = make_table({{"a", 5, 1.0}, {"b", 0, 0.0}}, "", {"a", "b"}, {5, 0});
    CHECK_FALSE(t.cells[0][1].has_value());
    CHECK(t.warnings.size() == 2);
    CHECK(*t.grand_avg == 0.5);
    CHECK(t.to_csv().find("NA") != std::string::npos);
    CHECK_THROWS_AS(make_table({{"z", 5, 1.0}}, "", {"a"}, {5}), Error);
  }
  SUBCASE("condition-cell t-test") {
    std::vector<ScoredUtterance> a, b;
    for (const char* n : {"car", "pink"})
      for (double snr : {15, 10, 5, 0, -5, -10}) {
        a.push_back({n, snr, 0.5 + snr / 100});
        b.push_back({n, snr, 0.55 + snr / 100 + (snr > 0 ? 0.01 : 0.0)});
      }
    const auto r = ttest_tables(make_table(a), make_table(b));
    CHECK(r.n == 12);
    CHECK(r.mean_diff > 0.0);
    CHECK(r.significant);
  }
}

TEST_CASE("evaluate aggregates per-utterance scores in order") {
  std::vector<Waveform> clean, proc;
  for (int i = 0; i < 4; ++i) {
    clean.push_back(testing::random_wave(3000, 10 + i));
    proc.push_back(axpy(1.0, clean.back(), 0.1 * (i + 1), testing::random_wave(3000, 50 + i)));
  }
  std::vector<const Waveform*> c, p;
  for (int i = 0; i < 4; ++i) {
    c.push_back(&clean[i]);
    p.push_back(&proc[i]);
  }
  const auto r1 = evaluate(Metric::SI_SDR, c, p, 1), r3 = evaluate(Metric::SI_SDR, c, p, 3);
  CHECK(r1.per_utterance == r3.per_utterance);
  for (int i = 0; i < 4; ++i) CHECK(r1.per_utterance[i] == si_sdr(clean[i], proc[i]));
  CHECK(r1.per_utterance[0] > r1.per_utterance[3]);
  CHECK(metric_from_string("seg_snr") == Metric::SEG_SNR);
  CHECK_THROWS_AS(metric_from_string("pesq"), ConfigError);
}
