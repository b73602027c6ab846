// daeme/experiment/experiment.hpp

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

#ifndef DAEME_EXPERIMENT_EXPERIMENT_HPP_
#define DAEME_EXPERIMENT_EXPERIMENT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "daeme/corpus/corpus.hpp"
#include "daeme/dsdt/dsdt.hpp"
#include "daeme/ensemble/ensemble.hpp"
#include "daeme/eval/metrics.hpp"
#include "daeme/eval/table.hpp"
#include "daeme/nn/model.hpp"
#include "daeme/nn/train.hpp"

namespace daeme::experiment {

struct TreeConfig {
  dsdt::TreeKind kind = dsdt::TreeKind::UAT;
  dsdt::PlanVariant plan = dsdt::PlanVariant::UAT4;
  std::vector<int> custom_ids;
  dsdt::SatMode sat = dsdt::SatMode::None;
  double snr_threshold_db = 10.0;
  int nc_clusters = 4;  ///< NC trees only
  std::uint64_t seed = 0;  ///< RT / NC partition seed, derived from the master seed

  nlohmann::json to_json() const;
  static TreeConfig from_json(const nlohmann::json& j);
};

enum class Suite { UAT_vs_RT, decoder_types, SS_vs_WD, seen_vs_unseen };

std::string_view to_string(Suite s);
Suite suite_from_string(std::string_view s);

struct AblationConfig {
  int n_seeds = 5;
  /// Held-out test noise kinds for seen_vs_unseen (the seen kinds are the
  /// train kinds). Empty means the corpus test kinds.
  std::vector<corpus::NoiseKind> held_out;
  /// UAT_vs_RT: also train a single model widened to the encoder's size.
  bool param_matched_single = false;

  nlohmann::json to_json() const;
  static AblationConfig from_json(const nlohmann::json& j);
};

/// One JSON document describes a whole run. Sub-seeds are derived from
/// `seed` by resolve(); values given for them in the file are replaced.
struct ExperimentConfig {
  corpus::CorpusConfig corpus;
  TreeConfig tree;
  ensemble::FeatureConfig features;
  nn::ModelSpec component = nn::ModelSpec::ddae(257, 257, 3, 128);
  ensemble::WarmStart warm_start = ensemble::WarmStart::Auto;
  ensemble::DecoderOptions decoder;
  /// Shared by every component and decoder model of the run.
  nn::TrainConfig train;
  std::vector<eval::Metric> metrics{eval::Metric::STOI, eval::Metric::SI_SDR, eval::Metric::SEG_SNR};
  AblationConfig ablation;
  std::string out_dir = "daeme_run";
  std::uint64_t seed = 1;

  /// Fills every derived seed and the decoder training budget.
  ExperimentConfig resolved() const;
  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
  nlohmann::json to_json() const;
  /// Unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  /// SHA-256 of the resolved config without out_dir.
  std::string digest() const;
};

/// Thrown when a pipeline stage fails; the message names the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

enum class Stage { Corpus, Tree, Components, Decoder, Enhance, Metrics, Tables };

std::string_view to_string(Stage s);

struct RunOptions {
  bool resume = false;
  int jobs = 1;
  Stage until = Stage::Tables;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
  bool reused = false;
};

struct SystemResult {
  std::string name;
  bool oracle = false;  ///< BF decoding with test-time tags
  long parameters = 0;  ///< encoder (plan branches) + decoder
  std::vector<std::string> encoder_digests;
  std::vector<std::string> ids;
  std::vector<eval::ScoredUtterance> keys;  ///< noise and SNR per utterance
  std::vector<eval::MetricResult> metrics;
  std::vector<double> lps_mse;  ///< per utterance, enhanced vs clean LPS
  double mean_lps_mse = 0.0;
  /// One table per metric; label is "" or, for seen_vs_unseen, "seen"/"unseen".
  std::vector<std::pair<std::string, eval::ScoreTable>> tables;

  nlohmann::json to_json() const;
};

struct RunReport {
  nlohmann::json config;
  std::string config_digest;
  std::vector<SystemResult> systems;
  nlohmann::json ttests = nlohmann::json::array();
  nlohmann::json extra = nlohmann::json::object();
  std::vector<StageTiming> timing;
  std::vector<std::string> artifacts;

  /// Wall-clock fields are left out when `with_timing` is false.
  nlohmann::json to_json(bool with_timing = true) const;
};

/// corpus -> tree -> components -> decoder -> enhance -> metrics -> tables
/// under config.out_dir. With resume set, a stage whose recorded inputs
/// match is loaded instead of recomputed.
RunReport run_experiment(const ExperimentConfig& config, const RunOptions& opt = {});

/// Trains every system of the suite for n_seeds derived seeds and writes
/// per-seed tables, seed-averaged tables and paired t-tests.
RunReport run_ablation(Suite suite, const ExperimentConfig& config, const RunOptions& opt = {});

/// Cell-wise mean of equally shaped tables; margins recomputed.
eval::ScoreTable average_tables(const std::vector<eval::ScoreTable>& tables);

/// Parameters of a DDAE/HDDAE/FC spec with the given hidden width.
long parameter_count(const nn::ModelSpec& spec);

}  // namespace daeme::experiment

#endif  // DAEME_EXPERIMENT_EXPERIMENT_HPP_
