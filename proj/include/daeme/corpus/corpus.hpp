// daeme/corpus/corpus.hpp

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

#ifndef DAEME_CORPUS_CORPUS_HPP_
#define DAEME_CORPUS_CORPUS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "daeme/corpus/synth.hpp"
#include "daeme/corpus/waveform.hpp"

namespace daeme::corpus {

enum class Split { Train, Test };

std::string_view to_string(Split s);
Split split_from_string(std::string_view s);

/// Utterance-level attributes. Speaker class and SNR are assigned when the
/// pair is synthesized; a pair ingested without them is "untagged".
struct AttributeTag {
  std::optional<SpeakerClass> speaker;
  std::optional<double> snr_db;
  std::string noise_id;
  Split split = Split::Train;

  bool tagged() const { return speaker.has_value() && snr_db.has_value(); }
};

struct UtterancePair {
  std::string id;
  Waveform clean;
  Waveform noisy;
  AttributeTag tag;

  /// Throws unless both waveforms are valid, equally long and at one rate.
  void validate() const;
};

struct CorpusConfig {
  int n_train = 16;
  int n_test = 24;  // two utterances per cell of the default 2 x 6 test grid
  double duration_s = 1.0;
  std::vector<double> train_snrs;  ///< default: -10..20 dB, step 1
  std::vector<double> test_snrs;   ///< default: 15, 10, 5, 0, -5, -10 dB
  std::vector<NoiseKind> train_noises{NoiseKind::White, NoiseKind::BabbleProxy};
  std::vector<NoiseKind> test_noises{NoiseKind::Pink, NoiseKind::CarProxy};
  /// Reject configurations whose test noise kinds overlap the train kinds.
  bool disjoint_noises = true;
  /// Draw the noise segment at a seed-derived offset instead of offset 0.
  bool random_noise_offset = false;
  /// When false, speaker class and SNR are left out of the tags.
  bool tag_attributes = true;
  std::uint64_t seed = 1;

  CorpusConfig();
  void validate() const;
  nlohmann::json to_json() const;
  static CorpusConfig from_json(const nlohmann::json& j);
};

struct ManifestEntry {
  std::string id;
  std::string clean_path;  ///< relative to the corpus root
  std::string noisy_path;
  AttributeTag tag;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::string config_digest;
  std::string content_digest;

  nlohmann::json to_json() const;
  static CorpusManifest from_json(const nlohmann::json& j);
};

struct Corpus {
  std::vector<UtterancePair> pairs;
  CorpusManifest manifest;

  std::vector<const UtterancePair*> split(Split s) const;
};

/// Synthesizes the paired corpus. Every train utterance gets one randomly
/// chosen (noise kind, SNR); test utterances cycle over the test noise x SNR
/// grid. Speaker classes alternate so each split is balanced. Clean and
/// noisy audio share one gain (to keep the mixture below full scale) and are
/// rounded onto the 16-bit grid, so the in-memory corpus equals its WAVs.
Corpus build_corpus(const CorpusConfig& config);

/// Writes `<root>/wav/*.wav` and `<root>/manifest.json`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& root);

/// Reads a corpus written by write_corpus (or any manifest in that schema).
Corpus load_corpus(const std::filesystem::path& root);

nlohmann::json tag_to_json(const AttributeTag& tag);
AttributeTag tag_from_json(const nlohmann::json& j);

}  // namespace daeme::corpus

#endif  // DAEME_CORPUS_CORPUS_HPP_
