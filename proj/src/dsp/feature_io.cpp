// dsp/feature_io.cpp

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

#include "daeme/dsp/feature_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace daeme::dsp {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

}  // namespace

void write_feature_dump(const LpsFeatures& lps, const std::filesystem::path& path) {
  std::string out;
  const auto rows = static_cast<std::uint32_t>(lps.frames.rows());
  const auto cols = static_cast<std::uint32_t>(lps.frames.cols());
  put_u32(out, rows);
  put_u32(out, cols);
  put_u32(out, static_cast<std::uint32_t>(lps.hop));
  put_u32(out, static_cast<std::uint32_t>(lps.fft_size));
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c)
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(lps.frames(r, c))));
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("write_feature_dump: cannot open " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

LpsFeatures read_feature_dump(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("read_feature_dump: cannot open " + path.string());
  const std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (in.size() < 16) throw Error("read_feature_dump: truncated header");
  const std::uint32_t rows = get_u32(in, 0);
  const std::uint32_t cols = get_u32(in, 4);
  if (in.size() != 16 + std::size_t{4} * rows * cols) throw Error("read_feature_dump: size mismatch");
  LpsFeatures lps;
  lps.hop = static_cast<int>(get_u32(in, 8));
  lps.fft_size = static_cast<int>(get_u32(in, 12));
  lps.frames.resize(rows, cols);
  std::size_t pos = 16;
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c, pos += 4)
      lps.frames(r, c) = std::bit_cast<float>(get_u32(in, pos));
  return lps;
}

}  // namespace daeme::dsp
