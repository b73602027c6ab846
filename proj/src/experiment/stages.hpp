// experiment/stages.hpp

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
// Cached pipeline stages shared by single runs and ablation suites.

#ifndef DAEME_EXPERIMENT_STAGES_HPP_
#define DAEME_EXPERIMENT_STAGES_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "daeme/experiment/experiment.hpp"

namespace daeme::experiment::detail {

namespace fs = std::filesystem;

struct Ctx {
  bool resume = false;
  int jobs = 1;
  std::vector<StageTiming>* timing = nullptr;
  std::string label;  ///< prefix for timing entries
};

struct CorpusArt {
  corpus::Corpus corpus;
  std::string key;
};

struct TreeArt {
  dsdt::Dsdt tree;
  dsdt::PartitionPlan plan;
  std::string key;
};

/// Analysed train or test pairs, prepared on first use.
class PreparedSet {
 public:
  PreparedSet(const CorpusArt& c, corpus::Split split, const ensemble::FeatureConfig& fc, bool with_wd, int jobs)
      : corpus_(c), split_(split), fc_(fc), with_wd_(with_wd), jobs_(jobs) {}
  const std::vector<ensemble::PreparedPair>& get();

 private:
  const CorpusArt& corpus_;
  corpus::Split split_;
  ensemble::FeatureConfig fc_;
  bool with_wd_;
  int jobs_;
  std::optional<std::vector<ensemble::PreparedPair>> pairs_;
};

struct EncoderArt {
  ensemble::MultiBranchEncoder enc;
  std::string key;
};

struct DecoderArt {
  ensemble::Decoder dec;
  std::string key;
};

struct EnhanceArt {
  std::vector<std::string> ids;
  std::vector<corpus::Waveform> enhanced;  ///< on the 16-bit grid
  std::vector<double> lps_mse;
  std::string key;
};

CorpusArt stage_corpus(const corpus::CorpusConfig& cfg, const fs::path& dir, Ctx& ctx);
TreeArt stage_tree(const TreeConfig& cfg, const CorpusArt& corpus, const fs::path& dir, Ctx& ctx);
EncoderArt stage_components(const ExperimentConfig& cfg, const nn::ModelSpec& spec, ensemble::WarmStart warm,
                            const TreeArt& tree, PreparedSet& train, const fs::path& dir, Ctx& ctx);
DecoderArt stage_decoder(const ensemble::DecoderOptions& opt, const EncoderArt& enc, PreparedSet& train,
                         const fs::path& dir, Ctx& ctx);
EnhanceArt stage_enhance(const EncoderArt& enc, const DecoderArt& dec, const CorpusArt& corpus, PreparedSet& test,
                         const fs::path& dir, Ctx& ctx);
std::vector<eval::MetricResult> stage_metrics(const std::vector<eval::Metric>& metrics, const EnhanceArt& enh,
                                              const CorpusArt& corpus, const fs::path& dir, Ctx& ctx);

/// Fills ids, keys, metrics, lps_mse and parameter counts.
SystemResult assemble(const std::string& name, const EncoderArt& enc, const DecoderArt& dec, const EnhanceArt& enh,
                      const std::vector<eval::MetricResult>& metrics, const CorpusArt& corpus);

/// Builds one table per metric (restricted to `noises` when non-empty) and
/// writes `<dir>/<prefix><metric>.csv` plus the `_full.csv` companion.
void add_tables(SystemResult& sys, const std::string& label, const std::vector<std::string>& noises,
                const fs::path& dir, const std::string& prefix, std::vector<std::string>* artifacts);

void write_text(const fs::path& path, const std::string& text);
std::string key_of(const nlohmann::json& j);

}  // namespace daeme::experiment::detail

#endif  // DAEME_EXPERIMENT_STAGES_HPP_
