// nn/checkpoint.cpp

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

#include "daeme/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace daeme::nn {

namespace {

constexpr char kMagic[8] = {'D', 'A', 'E', 'M', 'E', 'N', 'N', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& o, T v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error("checkpoint " + path + " is truncated");
  return v;
}

std::filesystem::path sidecar(const std::filesystem::path& p) { return p.string() + ".json"; }

}  // namespace

void save_model(const Model& model, const std::filesystem::path& path, const nlohmann::json& extra) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write checkpoint " + path.string());
  f.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(f, kVersion);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(model.spec().arch));
  put<std::uint32_t>(f, static_cast<std::uint32_t>(model.spec().in_dim));
  put<std::uint32_t>(f, static_cast<std::uint32_t>(model.spec().out_dim));
  put<std::uint64_t>(f, model.seed());
  put<std::uint64_t>(f, static_cast<std::uint64_t>(model.num_parameters()));
  f.write(reinterpret_cast<const char*>(model.parameters().data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(model.num_parameters())));
  if (!f) throw Error("failed writing checkpoint " + path.string());

  nlohmann::json j;
  j["spec"] = model.spec().to_json();
  j["seed"] = model.seed();
  j["num_parameters"] = model.num_parameters();
  j["digest"] = model_digest(model);
  if (!extra.is_null()) j["extra"] = extra;
  std::ofstream s(sidecar(path), std::ios::trunc);
  if (!s) throw Error("cannot write checkpoint sidecar for " + path.string());
  s << j.dump(2) << '\n';
}

Model load_model(const std::filesystem::path& path) {
  const std::string p = path.string();
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open checkpoint " + p);
  char magic[8];
  if (!f.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw Error("checkpoint " + p + " has a bad magic number");
  if (get<std::uint32_t>(f, p) != kVersion) throw Error("checkpoint " + p + " has an unsupported version");
  const auto arch = get<std::uint32_t>(f, p);
  const auto in_dim = get<std::uint32_t>(f, p);
  const auto out_dim = get<std::uint32_t>(f, p);
  const auto seed = get<std::uint64_t>(f, p);
  const auto count = get<std::uint64_t>(f, p);

  std::ifstream s(sidecar(path));
  if (!s) throw Error("checkpoint sidecar missing for " + p);
  nlohmann::json j;
  try {
    s >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint sidecar for " + p + " is malformed: " + e.what());
  }
  const ModelSpec spec = ModelSpec::from_json(j.at("spec"));
  if (static_cast<std::uint32_t>(spec.arch) != arch || static_cast<std::uint32_t>(spec.in_dim) != in_dim ||
      static_cast<std::uint32_t>(spec.out_dim) != out_dim)
    throw Error("checkpoint " + p + " disagrees with its sidecar");
  Model m(spec, seed);
  if (static_cast<std::uint64_t>(m.num_parameters()) != count)
    throw Error("checkpoint " + p + " has " + std::to_string(count) + " parameters, spec implies " +
                std::to_string(m.num_parameters()));
  if (!f.read(reinterpret_cast<char*>(m.parameters().data()),
              static_cast<std::streamsize>(sizeof(double) * count)))
    throw Error("checkpoint " + p + " is truncated");
  if (f.peek() != std::char_traits<char>::eof()) throw Error("checkpoint " + p + " has trailing bytes");
  return m;
}

std::string model_digest(const Model& model) {
  return sha256_hex(std::span<const double>(model.parameters().data(), static_cast<std::size_t>(model.num_parameters())));
}

}  // namespace daeme::nn
