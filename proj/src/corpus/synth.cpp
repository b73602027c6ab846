// corpus/synth.cpp

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

#include "daeme/corpus/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "daeme/dsp/fft.hpp"

namespace daeme::corpus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rough vowel formant targets (F1, F2, F3) for class A; class B is scaled up.
constexpr std::array<std::array<double, 3>, 6> kVowels = {{
    {730.0, 1090.0, 2440.0},
    {530.0, 1840.0, 2480.0},
    {270.0, 2290.0, 3010.0},
    {570.0, 840.0, 2410.0},
    {300.0, 870.0, 2240.0},
    {660.0, 1720.0, 2410.0},
}};
constexpr std::array<double, 4> kFormantGain = {1.0, 0.8, 0.5, 0.4};
constexpr std::array<double, 4> kFormantBw = {80.0, 110.0, 150.0, 200.0};

std::size_t sample_count(double duration_s, int sample_rate) {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

void normalize_rms(std::vector<double>& x, double target) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  const double r = std::sqrt(acc / static_cast<double>(x.size()));
  if (r <= 0.0) throw Error("synth: generated signal has zero power");
  const double g = target / r;
  for (double& v : x) v *= g;
}

// Gaussian noise with power spectrum shaped by |weight(f)|^2.
template <typename Weight>
std::vector<double> shaped_noise(std::size_t n, int sample_rate, Rng& rng, Weight weight) {
  const std::size_t len = std::max<std::size_t>(n, 2);
  std::vector<double> x(len);
  for (double& v : x) v = rng.normal();
  dsp::RealFft fft(static_cast<int>(len));
  auto spec = fft.forward(x);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(len);
    spec[k] *= weight(f);
  }
  x = fft.inverse(spec);
  x.resize(n);
  return x;
}

}  // namespace

std::string_view to_string(SpeakerClass c) { return c == SpeakerClass::A ? "A" : "B"; }

SpeakerClass speaker_class_from_string(std::string_view s) {
  if (s == "A") return SpeakerClass::A;
  if (s == "B") return SpeakerClass::B;
  throw Error("unknown speaker class '" + std::string(s) + "'");
}

F0Band f0_band(SpeakerClass c) {
  return c == SpeakerClass::A ? F0Band{100.0, 140.0} : F0Band{190.0, 230.0};
}

Waveform synth_voice(const VoiceSpec& spec) {
  if (!(spec.duration_s >= 0.5 && spec.duration_s <= 10.0))
    throw Error("synth_voice: duration must lie in [0.5, 10] s");
  if (spec.sample_rate <= 0) throw Error("synth_voice: sample rate must be positive");
  Rng rng(spec.seed);
  const int sr = spec.sample_rate;
  const std::size_t n = sample_count(spec.duration_s, sr);
  const F0Band band = f0_band(spec.speaker);
  const double formant_scale = spec.speaker == SpeakerClass::A ? 1.0 : 1.18;

  const double f0_base = rng.uniform(band.lo, band.hi);
  const double glide_rate = rng.uniform(0.3, 1.2);
  const double glide_phase = rng.uniform(0.0, kTwoPi);
  const double am_rate = rng.uniform(2.0, 8.0);
  const double am_phase = rng.uniform(0.0, kTwoPi);
  const double f4 = 3500.0 * formant_scale;

  // Piecewise vowel targets with raised-cosine transitions.
  struct Segment {
    double start;
    std::array<double, 3> formants;
  };
  std::vector<Segment> segments;
  for (double t = 0.0; t < spec.duration_s + 0.3;) {
    const auto& v = kVowels[rng.index(kVowels.size())];
    segments.push_back({t, {v[0] * formant_scale, v[1] * formant_scale, v[2] * formant_scale}});
    t += rng.uniform(0.12, 0.3);
  }

  const int harmonics = static_cast<int>(0.48 * sr / (f0_base * 1.03));
  std::vector<double> phase0(harmonics);
  for (double& p : phase0) p = rng.uniform(0.0, kTwoPi);
  std::vector<double> amp(harmonics, 0.0);

  std::vector<double> out(n, 0.0);
  double phi = 0.0;
  std::size_t seg = 0;
  constexpr std::size_t kBlock = 32;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double f0 = std::clamp(f0_base * (1.0 + 0.02 * std::sin(kTwoPi * glide_rate * t + glide_phase)),
                                 band.lo, band.hi);
    if (i % kBlock == 0) {
      while (seg + 2 < segments.size() && segments[seg + 1].start <= t) ++seg;
      const Segment& a = segments[seg];
      const Segment& b = segments[std::min(seg + 1, segments.size() - 1)];
      const double span = std::max(b.start - a.start, 1e-9);
      const double u = std::clamp((t - a.start) / span, 0.0, 1.0);
      const double w = 0.5 - 0.5 * std::cos(std::numbers::pi * u);
      std::array<double, 4> formants{};
      for (int m = 0; m < 3; ++m) formants[m] = (1.0 - w) * a.formants[m] + w * b.formants[m];
      formants[3] = f4;
      for (int k = 1; k <= harmonics; ++k) {
        const double fk = k * f0;
        double emphasis = 0.0;
        for (int m = 0; m < 4; ++m) {
          const double z = (fk - formants[m]) / kFormantBw[m];
          emphasis += kFormantGain[m] * std::exp(-0.5 * z * z);
        }
        amp[k - 1] = (1.0 + 0.8 * emphasis) / k;
      }
    }
    phi += kTwoPi * f0 / sr;
    if (phi > kTwoPi * 1e6) phi = std::fmod(phi, kTwoPi);
    double s = 0.0;
    for (int k = 1; k <= harmonics; ++k) s += amp[k - 1] * std::sin(k * phi + phase0[k - 1]);
    const double env = 0.55 + 0.45 * std::sin(kTwoPi * am_rate * t + am_phase);
    out[i] = env * s;
  }

  // Short fades avoid clicks at the boundaries.
  const std::size_t fade = std::min<std::size_t>(n / 2, static_cast<std::size_t>(0.01 * sr));
  for (std::size_t i = 0; i < fade; ++i) {
    const double g = static_cast<double>(i) / fade;
    out[i] *= g;
    out[n - 1 - i] *= g;
  }
  normalize_rms(out, kSynthRms);
  return Waveform{std::move(out), sr};
}

std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::White: return "white";
    case NoiseKind::Pink: return "pink";
    case NoiseKind::BabbleProxy: return "babble_proxy";
    case NoiseKind::CarProxy: return "car_proxy";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(std::string_view s) {
  if (s == "white") return NoiseKind::White;
  if (s == "pink") return NoiseKind::Pink;
  if (s == "babble_proxy" || s == "babble") return NoiseKind::BabbleProxy;
  if (s == "car_proxy" || s == "car") return NoiseKind::CarProxy;
  throw Error("unknown noise kind '" + std::string(s) + "'");
}

Waveform synth_noise(NoiseKind kind, double duration_s, std::uint64_t seed, int sample_rate) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw Error("synth_noise: duration must be positive");
  if (sample_rate <= 0) throw Error("synth_noise: sample rate must be positive");
  const std::size_t n = std::max<std::size_t>(1, sample_count(duration_s, sample_rate));
  Rng rng(seed);
  std::vector<double> out;

  switch (kind) {
    case NoiseKind::White: {
      out.resize(n);
      for (double& v : out) v = rng.normal();
      break;
    }
    case NoiseKind::Pink: {
      // -3 dB/octave: amplitude ~ f^{-1/2}, held flat below 20 Hz.
      out = shaped_noise(n, sample_rate, rng, [](double f) {
        if (f <= 0.0) return 0.0;
        return 1.0 / std::sqrt(std::max(f, 20.0));
      });
      break;
    }
    case NoiseKind::BabbleProxy: {
      out.assign(n, 0.0);
      const int voices = 6 + static_cast<int>(rng.index(3));
      const double voice_dur = std::clamp(duration_s, 0.5, 10.0);
      for (int v = 0; v < voices; ++v) {
        VoiceSpec vs;
        vs.speaker = rng.index(2) == 0 ? SpeakerClass::A : SpeakerClass::B;
        vs.duration_s = voice_dur;
        vs.seed = derive_seed(seed, "babble-voice", static_cast<std::uint64_t>(v));
        vs.sample_rate = sample_rate;
        const Waveform w = synth_voice(vs);
        const std::size_t shift = rng.index(w.size());
        for (std::size_t i = 0; i < n; ++i) out[i] += w.samples[(i + shift) % w.size()];
      }
      break;
    }
    case NoiseKind::CarProxy: {
      // Low-pass rumble (4th-order roll-off above ~120 Hz) plus an engine comb.
      out = shaped_noise(n, sample_rate, rng, [](double f) {
        const double r = f / 120.0;
        return 1.0 / std::sqrt(1.0 + r * r * r * r);
      });
      normalize_rms(out, 1.0);
      const double engine = rng.uniform(25.0, 45.0);
      const double wobble_rate = rng.uniform(0.1, 0.5);
      std::vector<double> comb(n, 0.0);
      std::vector<double> phases;
      for (int h = 1; h * engine < 300.0; ++h) phases.push_back(rng.uniform(0.0, kTwoPi));
      double phi = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        phi += kTwoPi * engine * (1.0 + 0.01 * std::sin(kTwoPi * wobble_rate * t)) / sample_rate;
        double s = 0.0;
        for (std::size_t h = 0; h < phases.size(); ++h)
          s += std::sin((h + 1) * phi + phases[h]) / std::pow(h + 1.0, 0.7);
        comb[i] = s;
      }
      normalize_rms(comb, 1.0);
      for (std::size_t i = 0; i < n; ++i) out[i] += comb[i];
      break;
    }
  }
  normalize_rms(out, kSynthRms);
  return Waveform{std::move(out), sample_rate};
}

double snr_gain(const Waveform& clean, const Waveform& noise, double snr_db, std::size_t noise_offset) {
  if (!std::isfinite(snr_db)) throw Error("mix_at_snr: SNR must be finite");
  if (clean.sample_rate != noise.sample_rate) throw Error("mix_at_snr: sample rate mismatch");
  if (noise_offset + clean.size() > noise.size())
    throw Error("mix_at_snr: noise shorter than clean (after offset)");
  const double pc = power(clean);
  double pn = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double v = noise.samples[noise_offset + i];
    pn += v * v;
  }
  pn /= static_cast<double>(clean.size());
  if (!(pc > 0.0)) throw Error("mix_at_snr: clean has zero power");
  if (!(pn > 0.0)) throw Error("mix_at_snr: noise has zero power");
  return std::sqrt(pc / (pn * std::pow(10.0, snr_db / 10.0)));
}

Waveform mix_at_snr(const Waveform& clean, const Waveform& noise, double snr_db, std::size_t noise_offset) {
  const double g = snr_gain(clean, noise, snr_db, noise_offset);
  Waveform out = clean;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += g * noise.samples[noise_offset + i];
  return out;
}

double measured_snr_db(const Waveform& clean, const Waveform& noisy) {
  if (clean.size() != noisy.size()) throw Error("measured_snr_db: length mismatch");
  double pc = 0.0;
  double pe = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double e = noisy.samples[i] - clean.samples[i];
    pc += clean.samples[i] * clean.samples[i];
    pe += e * e;
  }
  return 10.0 * std::log10(pc / pe);
}

}  // namespace daeme::corpus
