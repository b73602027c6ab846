// corpus/waveform.cpp

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

#include "daeme/corpus/waveform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>

namespace daeme::corpus {

void Waveform::validate() const {
  if (sample_rate <= 0) throw Error("waveform: sample rate must be positive");
  if (samples.empty()) throw Error("waveform: empty");
  for (double s : samples)
    if (!std::isfinite(s)) throw Error("waveform: non-finite sample");
}

void Waveform::require_rate(int rate) const {
  if (sample_rate != rate)
    throw Error("waveform: expected sample rate " + std::to_string(rate) + " Hz, got " +
                std::to_string(sample_rate) + " Hz");
}

double power(const Waveform& w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : w.samples) acc += s * s;
  return acc / static_cast<double>(w.samples.size());
}

double rms(const Waveform& w) { return std::sqrt(power(w)); }

std::int16_t quantize_sample(double x) {
  constexpr double kMax = 1.0 - 1.0 / 32768.0;
  x = std::clamp(x, -1.0, kMax);
  return static_cast<std::int16_t>(std::lround(x * 32768.0));
}

Waveform quantized(const Waveform& wave) {
  Waveform out = wave;
  for (double& s : out.samples) s = quantize_sample(s) / 32768.0;
  return out;
}

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

}  // namespace

Waveform wav_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("wav_read: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();
  if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE")
    throw Error("wav_read: not a RIFF/WAVE file" + where);

  bool have_fmt = false;
  int channels = 0;
  int rate = 0;
  int bits = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
    const std::size_t len = le32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size() && id != "data")
      throw Error("wav_read: truncated chunk '" + id + "'" + where);
    if (id == "fmt ") {
      if (len < 16) throw Error("wav_read: short fmt chunk" + where);
      std::uint16_t format = le16(&bytes[body]);
      channels = le16(&bytes[body + 2]);
      rate = static_cast<int>(le32(&bytes[body + 4]));
      bits = le16(&bytes[body + 14]);
      if (format == kFormatExtensible && len >= 26) format = le16(&bytes[body + 24]);
      if (format != kFormatPcm) throw Error("wav_read: non-PCM encoding" + where);
      if (bits != 16) throw Error("wav_read: only 16-bit PCM is supported" + where);
      if (channels != 1) throw Error("wav_read: unsupported channel count " +
                                     std::to_string(channels) + where);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error("wav_read: data chunk before fmt chunk" + where);
      const std::size_t avail = std::min(len, bytes.size() - body);
      Waveform w;
      w.sample_rate = rate;
      w.samples.resize(avail / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(le16(&bytes[body + 2 * i]));
        w.samples[i] = v / 32768.0;
      }
      if (w.samples.empty()) throw Error("wav_read: no samples" + where);
      if (rate <= 0) throw Error("wav_read: invalid sample rate" + where);
      return w;
    }
    pos = body + len + (len & 1);
  }
  throw Error("wav_read: no data chunk" + where);
}

void wav_write(const Waveform& wave, const std::filesystem::path& path) {
  if (wave.sample_rate <= 0) throw Error("wav_write: sample rate must be positive");
  for (double s : wave.samples)
    if (!std::isfinite(s)) throw Error("wav_write: non-finite sample");

  const auto data_bytes = static_cast<std::uint32_t>(wave.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (double s : wave.samples) put16(out, static_cast<std::uint16_t>(quantize_sample(s)));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("wav_write: cannot open " + path.string() + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("wav_write: write failed for " + path.string());
}

}  // namespace daeme::corpus
