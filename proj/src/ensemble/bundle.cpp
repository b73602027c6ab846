// ensemble/bundle.cpp

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

#include <cstring>
#include <fstream>
#include <map>

#include "daeme/ensemble/ensemble.hpp"
#include "daeme/nn/checkpoint.hpp"

namespace daeme::ensemble {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr char kArrayMagic[8] = {'D', 'A', 'E', 'M', 'E', 'A', 'R', '1'};

using ArrayMap = std::map<std::string, Matrix>;

void write_arrays(const ArrayMap& arrays, const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.write(kArrayMagic, sizeof kArrayMagic);
  const std::uint64_t n = arrays.size();
  f.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const auto& [name, m] : arrays) {
    const std::uint32_t len = static_cast<std::uint32_t>(name.size());
    const std::uint64_t rows = static_cast<std::uint64_t>(m.rows()), cols = static_cast<std::uint64_t>(m.cols());
    f.write(reinterpret_cast<const char*>(&len), sizeof len);
    f.write(name.data(), len);
    f.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    f.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    f.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * rows * cols));
  }
  if (!f) throw Error("failed writing " + path.string());
}

ArrayMap read_arrays(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  auto fail = [&]() -> void { throw Error(path.string() + " is truncated or corrupt"); };
  char magic[8];
  if (!f.read(magic, sizeof magic) || std::memcmp(magic, kArrayMagic, sizeof magic) != 0) fail();
  std::uint64_t n = 0;
  if (!f.read(reinterpret_cast<char*>(&n), sizeof n)) fail();
  ArrayMap out;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint32_t len = 0;
    std::uint64_t rows = 0, cols = 0;
    if (!f.read(reinterpret_cast<char*>(&len), sizeof len) || len > 4096) fail();
    std::string name(len, '\0');
    if (!f.read(name.data(), len)) fail();
    if (!f.read(reinterpret_cast<char*>(&rows), sizeof rows) || !f.read(reinterpret_cast<char*>(&cols), sizeof cols))
      fail();
    if (rows * cols > (std::uint64_t{1} << 32)) fail();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (!f.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * rows * cols))) fail();
    out.emplace(std::move(name), std::move(m));
  }
  return out;
}

const Matrix& need(const ArrayMap& a, const std::string& name) {
  auto it = a.find(name);
  if (it == a.end()) throw Error("bundle array '" + name + "' is missing");
  return it->second;
}

void put_norm(ArrayMap& a, const std::string& prefix, const Normalizer& z) {
  a[prefix + ".mean"] = z.mean;
  a[prefix + ".scale"] = z.scale;
}

Normalizer get_norm(const ArrayMap& a, const std::string& prefix) {
  return {need(a, prefix + ".mean").row(0), need(a, prefix + ".scale").row(0)};
}

json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(path.string() + " is malformed: " + e.what());
  }
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

std::string file_digest(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

}  // namespace

void save_encoder(const MultiBranchEncoder& enc, const fs::path& dir) {
  fs::create_directories(dir);
  ArrayMap arrays;
  json comps = json::array();
  for (std::size_t i = 0; i < enc.components.size(); ++i) {
    const auto& c = enc.components[i];
    const std::string name = "branch_" + std::to_string(i);
    nn::save_model(c.model, dir / (name + ".bin"));
    put_norm(arrays, name + ".in", c.in_norm);
    put_norm(arrays, name + ".out", c.out_norm);
    comps.push_back({{"node", c.branch.node},
                     {"band", std::string(to_string(c.branch.band))},
                     {"checkpoint", name + ".bin"},
                     {"members", c.members},
                     {"subset_digest", c.subset_digest},
                     {"warm_started", c.warm_started},
                     {"init_digest", c.init_digest},
                     {"loss_curve", c.loss_curve},
                     {"digest", nn::model_digest(c.model)}});
  }
  write_arrays(arrays, dir / "encoder_arrays.bin");
  json j;
  j["tree"] = enc.tree.to_json();
  j["plan"] = enc.plan.to_json();
  j["features"] = enc.features.to_json();
  j["components"] = std::move(comps);
  j["arrays_digest"] = file_digest(dir / "encoder_arrays.bin");
  write_json(j, dir / "encoder.json");
}

MultiBranchEncoder load_encoder(const fs::path& dir) {
  const json j = read_json(dir / "encoder.json");
  if (file_digest(dir / "encoder_arrays.bin") != j.at("arrays_digest").get<std::string>())
    throw Error("encoder arrays in " + dir.string() + " do not match their recorded digest");
  const ArrayMap arrays = read_arrays(dir / "encoder_arrays.bin");
  MultiBranchEncoder enc;
  enc.tree = dsdt::Dsdt::from_json(j.at("tree"));
  enc.plan = dsdt::PartitionPlan::from_json(j.at("plan"));
  enc.features = FeatureConfig::from_json(j.at("features"));
  const auto branches = enc.plan.branches();
  const auto& comps = j.at("components");
  if (comps.size() != branches.size()) throw Error("encoder bundle: component count does not match the plan");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& e = comps[i];
    const std::string name = "branch_" + std::to_string(i);
    ComponentModel c;
    c.branch = branches[i];
    if (e.at("node").get<int>() != c.branch.node || e.at("band").get<std::string>() != to_string(c.branch.band))
      throw Error("encoder bundle: component " + std::to_string(i) + " is out of plan order");
    c.model = nn::load_model(dir / e.at("checkpoint").get<std::string>());
    if (nn::model_digest(c.model) != e.at("digest").get<std::string>())
      throw Error("encoder bundle: checkpoint " + name + " does not match its digest");
    c.in_norm = get_norm(arrays, name + ".in");
    c.out_norm = get_norm(arrays, name + ".out");
    c.members = e.at("members").get<std::vector<std::string>>();
    c.subset_digest = e.at("subset_digest").get<std::string>();
    c.warm_started = e.at("warm_started").get<bool>();
    c.init_digest = e.at("init_digest").get<std::string>();
    c.loss_curve = e.at("loss_curve").get<std::vector<double>>();
    enc.components.push_back(std::move(c));
  }
  return enc;
}

void save_decoder(const Decoder& dec, const fs::path& dir) {
  fs::create_directories(dir);
  ArrayMap arrays;
  json j;
  j["kind"] = std::string(to_string(dec.kind));
  j["lambda"] = dec.lambda;
  j["in_dim"] = dec.in_dim;
  if (dec.kind == DecoderKind::LR) arrays["W"] = dec.W;
  if (dec.net) {
    nn::save_model(*dec.net, dir / "decoder.bin");
    put_norm(arrays, "in", dec.in_norm);
    put_norm(arrays, "out", dec.out_norm);
    j["checkpoint"] = "decoder.bin";
    j["digest"] = nn::model_digest(*dec.net);
  }
  write_arrays(arrays, dir / "decoder_arrays.bin");
  j["arrays_digest"] = file_digest(dir / "decoder_arrays.bin");
  write_json(j, dir / "decoder.json");
}

Decoder load_decoder(const fs::path& dir) {
  const json j = read_json(dir / "decoder.json");
  if (file_digest(dir / "decoder_arrays.bin") != j.at("arrays_digest").get<std::string>())
    throw Error("decoder arrays in " + dir.string() + " do not match their recorded digest");
  const ArrayMap arrays = read_arrays(dir / "decoder_arrays.bin");
  Decoder d;
  d.kind = decoder_kind_from_string(j.at("kind").get<std::string>());
  d.lambda = j.at("lambda").get<double>();
  d.in_dim = j.at("in_dim").get<Eigen::Index>();
  if (d.kind == DecoderKind::LR) d.W = need(arrays, "W");
  if (j.contains("checkpoint")) {
    d.net = nn::load_model(dir / j.at("checkpoint").get<std::string>());
    if (nn::model_digest(*d.net) != j.at("digest").get<std::string>())
      throw Error("decoder checkpoint does not match its digest");
    d.in_norm = get_norm(arrays, "in");
    d.out_norm = get_norm(arrays, "out");
  }
  return d;
}

void save_system(const DaemeSystem& sys, const fs::path& dir) {
  save_encoder(sys.encoder, dir);
  save_decoder(sys.decoder, dir);
  json m;
  m["provenance"] = sys.provenance;
  m["decoder"] = std::string(to_string(sys.decoder.kind));
  m["oracle"] = sys.decoder.kind == DecoderKind::BF;
  json files = json::object();
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name != "manifest.json") files[name] = file_digest(entry.path());
  }
  m["files"] = files;
  m["encoder_digests"] = encoder_digests(sys.encoder);
  write_json(m, dir / "manifest.json");
}

DaemeSystem load_system(const fs::path& dir) {
  DaemeSystem s;
  const json m = read_json(dir / "manifest.json");
  for (const auto& [name, digest] : m.at("files").items())
    if (file_digest(dir / name) != digest.get<std::string>())
      throw Error("system bundle file " + name + " does not match the manifest digest");
  s.encoder = load_encoder(dir);
  s.decoder = load_decoder(dir);
  s.provenance = m.value("provenance", json{});
  return s;
}

}  // namespace daeme::ensemble
