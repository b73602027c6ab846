// corpus/corpus.cpp

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

#include "daeme/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace daeme::corpus {

using nlohmann::json;

std::string_view to_string(Split s) { return s == Split::Train ? "train" : "test"; }

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw Error("unknown split '" + std::string(s) + "'");
}

void UtterancePair::validate() const {
  clean.validate();
  noisy.validate();
  if (clean.size() != noisy.size()) throw Error("pair " + id + ": clean/noisy length mismatch");
  if (clean.sample_rate != noisy.sample_rate) throw Error("pair " + id + ": sample rate mismatch");
  if (tag.snr_db && !std::isfinite(*tag.snr_db)) throw Error("pair " + id + ": non-finite SNR tag");
}

CorpusConfig::CorpusConfig() {
  for (int s = -10; s <= 20; ++s) train_snrs.push_back(s);
  test_snrs = {15, 10, 5, 0, -5, -10};
}

void CorpusConfig::validate() const {
  if (n_train < 8) throw ConfigError("corpus: n_train must be at least 8");
  if (n_test < 0) throw ConfigError("corpus: n_test must be non-negative");
  if (!(duration_s >= 0.5 && duration_s <= 10.0))
    throw ConfigError("corpus: duration must lie in [0.5, 10] s");
  if (train_snrs.empty()) throw ConfigError("corpus: train SNR grid is empty");
  if (n_test > 0 && test_snrs.empty()) throw ConfigError("corpus: test SNR grid is empty");
  if (train_noises.empty()) throw ConfigError("corpus: no train noise kinds");
  if (n_test > 0 && test_noises.empty()) throw ConfigError("corpus: no test noise kinds");
  for (double s : train_snrs)
    if (!std::isfinite(s)) throw ConfigError("corpus: non-finite SNR in grid");
  for (double s : test_snrs)
    if (!std::isfinite(s)) throw ConfigError("corpus: non-finite SNR in grid");
  if (disjoint_noises) {
    for (NoiseKind k : test_noises)
      if (std::find(train_noises.begin(), train_noises.end(), k) != train_noises.end())
        throw ConfigError("corpus: held-out noise kind '" + std::string(to_string(k)) +
                          "' is also a train noise kind");
  }
}

json CorpusConfig::to_json() const {
  json j;
  j["n_train"] = n_train;
  j["n_test"] = n_test;
  j["duration_s"] = duration_s;
  j["train_snrs"] = train_snrs;
  j["test_snrs"] = test_snrs;
  auto kinds = [](const std::vector<NoiseKind>& v) {
    json a = json::array();
    for (NoiseKind k : v) a.push_back(std::string(to_string(k)));
    return a;
  };
  j["train_noises"] = kinds(train_noises);
  j["test_noises"] = kinds(test_noises);
  j["disjoint_noises"] = disjoint_noises;
  j["random_noise_offset"] = random_noise_offset;
  j["tag_attributes"] = tag_attributes;
  j["seed"] = seed;
  return j;
}

CorpusConfig CorpusConfig::from_json(const json& j) {
  CorpusConfig c;
  c.n_train = j.value("n_train", c.n_train);
  c.n_test = j.value("n_test", c.n_test);
  c.duration_s = j.value("duration_s", c.duration_s);
  if (j.contains("train_snrs")) c.train_snrs = j.at("train_snrs").get<std::vector<double>>();
  if (j.contains("test_snrs")) c.test_snrs = j.at("test_snrs").get<std::vector<double>>();
  auto kinds = [](const json& a) {
    std::vector<NoiseKind> v;
    for (const auto& s : a) v.push_back(noise_kind_from_string(s.get<std::string>()));
    return v;
  };
  if (j.contains("train_noises")) c.train_noises = kinds(j.at("train_noises"));
  if (j.contains("test_noises")) c.test_noises = kinds(j.at("test_noises"));
  c.disjoint_noises = j.value("disjoint_noises", c.disjoint_noises);
  c.random_noise_offset = j.value("random_noise_offset", c.random_noise_offset);
  c.tag_attributes = j.value("tag_attributes", c.tag_attributes);
  c.seed = j.value("seed", c.seed);
  return c;
}

json tag_to_json(const AttributeTag& tag) {
  json j;
  j["speaker"] = tag.speaker ? json(std::string(to_string(*tag.speaker))) : json(nullptr);
  j["snr_db"] = tag.snr_db ? json(*tag.snr_db) : json(nullptr);
  j["noise_id"] = tag.noise_id;
  j["split"] = std::string(to_string(tag.split));
  return j;
}

AttributeTag tag_from_json(const json& j) {
  AttributeTag t;
  if (j.contains("speaker") && !j.at("speaker").is_null())
    t.speaker = speaker_class_from_string(j.at("speaker").get<std::string>());
  if (j.contains("snr_db") && !j.at("snr_db").is_null()) t.snr_db = j.at("snr_db").get<double>();
  t.noise_id = j.value("noise_id", std::string{});
  t.split = split_from_string(j.value("split", std::string("train")));
  return t;
}

json CorpusManifest::to_json() const {
  json j;
  j["seed"] = seed;
  j["config"] = config;
  j["config_digest"] = config_digest;
  j["content_digest"] = content_digest;
  json e = json::array();
  for (const auto& m : entries)
    e.push_back({{"id", m.id}, {"clean", m.clean_path}, {"noisy", m.noisy_path}, {"tag", tag_to_json(m.tag)}});
  j["entries"] = std::move(e);
  return j;
}

CorpusManifest CorpusManifest::from_json(const json& j) {
  CorpusManifest m;
  m.seed = j.value("seed", std::uint64_t{0});
  m.config = j.value("config", json::object());
  m.config_digest = j.value("config_digest", std::string{});
  m.content_digest = j.value("content_digest", std::string{});
  std::set<std::string> ids;
  for (const auto& e : j.at("entries")) {
    ManifestEntry me;
    me.id = e.at("id").get<std::string>();
    me.clean_path = e.at("clean").get<std::string>();
    me.noisy_path = e.at("noisy").get<std::string>();
    me.tag = e.contains("tag") ? tag_from_json(e.at("tag")) : AttributeTag{};
    if (!ids.insert(me.id).second) throw Error("manifest: duplicate utterance id " + me.id);
    m.entries.push_back(std::move(me));
  }
  return m;
}

std::vector<const UtterancePair*> Corpus::split(Split s) const {
  std::vector<const UtterancePair*> out;
  for (const auto& p : pairs)
    if (p.tag.split == s) out.push_back(&p);
  return out;
}

namespace {

// Mixes one pair, applies a shared gain if the mixture would clip, and rounds
// both signals onto the 16-bit grid.
UtterancePair make_pair(const CorpusConfig& c, std::string id, SpeakerClass speaker, NoiseKind noise_kind,
                        double snr_db, Split split, std::uint64_t voice_seed, std::uint64_t noise_seed) {
  VoiceSpec vs;
  vs.speaker = speaker;
  vs.duration_s = c.duration_s;
  vs.seed = voice_seed;
  Waveform clean = synth_voice(vs);

  std::size_t offset = 0;
  double noise_dur = c.duration_s;
  if (c.random_noise_offset) {
    noise_dur += 0.5;
    Rng r(derive_seed(noise_seed, "offset"));
    offset = r.index(static_cast<std::size_t>(0.5 * clean.sample_rate));
  }
  const Waveform noise = synth_noise(noise_kind, noise_dur, noise_seed, clean.sample_rate);
  Waveform noisy = mix_at_snr(clean, noise, snr_db, offset);

  double peak = 0.0;
  for (double s : noisy.samples) peak = std::max(peak, std::abs(s));
  for (double s : clean.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.99) {
    const double g = 0.99 / peak;
    for (double& s : clean.samples) s *= g;
    for (double& s : noisy.samples) s *= g;
  }

  UtterancePair p;
  p.id = std::move(id);
  p.clean = quantized(clean);
  p.noisy = quantized(noisy);
  p.tag.noise_id = std::string(to_string(noise_kind));
  p.tag.split = split;
  if (c.tag_attributes) {
    p.tag.speaker = speaker;
    p.tag.snr_db = snr_db;
  }
  return p;
}

std::string pad_index(int i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

}  // namespace

Corpus build_corpus(const CorpusConfig& c) {
  c.validate();
  Corpus corpus;
  Rng pick(derive_seed(c.seed, "train-conditions"));

  for (int i = 0; i < c.n_train; ++i) {
    const SpeakerClass spk = i % 2 == 0 ? SpeakerClass::A : SpeakerClass::B;
    const NoiseKind noise = c.train_noises[pick.index(c.train_noises.size())];
    const double snr = c.train_snrs[pick.index(c.train_snrs.size())];
    corpus.pairs.push_back(make_pair(c, "tr" + pad_index(i), spk, noise, snr, Split::Train,
                                     derive_seed(c.seed, "train-voice", i),
                                     derive_seed(c.seed, "train-noise", i)));
  }

  const std::size_t cells = c.test_noises.size() * c.test_snrs.size();
  for (int i = 0; i < c.n_test; ++i) {
    // Consecutive (A, B) pairs share one cell so cells and classes stay balanced.
    const SpeakerClass spk = i % 2 == 0 ? SpeakerClass::A : SpeakerClass::B;
    const std::size_t cell = static_cast<std::size_t>(i / 2) % cells;
    const NoiseKind noise = c.test_noises[cell / c.test_snrs.size()];
    const double snr = c.test_snrs[cell % c.test_snrs.size()];
    corpus.pairs.push_back(make_pair(c, "te" + pad_index(i), spk, noise, snr, Split::Test,
                                     derive_seed(c.seed, "test-voice", i),
                                     derive_seed(c.seed, "test-noise", i)));
  }

  CorpusManifest& m = corpus.manifest;
  m.seed = c.seed;
  m.config = c.to_json();
  m.config_digest = sha256_hex(m.config.dump());
  std::string content;
  for (const auto& p : corpus.pairs) {
    m.entries.push_back({p.id, "wav/" + p.id + "_clean.wav", "wav/" + p.id + "_noisy.wav", p.tag});
    content += p.id;
    content += sha256_hex(p.clean.samples);
    content += sha256_hex(p.noisy.samples);
    content += tag_to_json(p.tag).dump();
  }
  m.content_digest = sha256_hex(content + m.config_digest);
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(root / "wav", ec);
  if (ec) throw Error("write_corpus: cannot create " + (root / "wav").string() + ": " + ec.message());
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    const auto& p = corpus.pairs[i];
    const auto& e = corpus.manifest.entries.at(i);
    wav_write(p.clean, root / e.clean_path);
    wav_write(p.noisy, root / e.noisy_path);
  }
  std::ofstream f(root / "manifest.json", std::ios::trunc);
  if (!f) throw Error("write_corpus: cannot write manifest in " + root.string());
  f << corpus.manifest.to_json().dump(2) << '\n';
}

Corpus load_corpus(const std::filesystem::path& root) {
  std::ifstream f(root / "manifest.json");
  if (!f) throw Error("load_corpus: no manifest.json in " + root.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("load_corpus: malformed manifest: ") + e.what());
  }
  Corpus c;
  c.manifest = CorpusManifest::from_json(j);
  for (const auto& e : c.manifest.entries) {
    UtterancePair p;
    p.id = e.id;
    p.clean = wav_read(root / e.clean_path);
    p.noisy = wav_read(root / e.noisy_path);
    p.tag = e.tag;
    p.validate();
    c.pairs.push_back(std::move(p));
  }
  return c;
}

}  // namespace daeme::corpus
