// experiment/config.cpp

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

#include <fstream>
#include <set>
#include <sstream>

#include "daeme/experiment/experiment.hpp"

namespace daeme::experiment {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

}  // namespace

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::UAT_vs_RT: return "UAT_vs_RT";
    case Suite::decoder_types: return "decoder_types";
    case Suite::SS_vs_WD: return "SS_vs_WD";
    case Suite::seen_vs_unseen: return "seen_vs_unseen";
  }
  return "?";
}

Suite suite_from_string(std::string_view s) {
  for (Suite v : {Suite::UAT_vs_RT, Suite::decoder_types, Suite::SS_vs_WD, Suite::seen_vs_unseen})
    if (s == to_string(v)) return v;
  throw ConfigError("unknown ablation suite '" + std::string(s) + "'");
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Corpus: return "corpus";
    case Stage::Tree: return "tree";
    case Stage::Components: return "components";
    case Stage::Decoder: return "decoder";
    case Stage::Enhance: return "enhance";
    case Stage::Metrics: return "metrics";
    case Stage::Tables: return "tables";
  }
  return "?";
}

json TreeConfig::to_json() const {
  return {{"kind", std::string(dsdt::to_string(kind))},
          {"plan", plan == dsdt::PlanVariant::UAT2   ? "UAT2"
                   : plan == dsdt::PlanVariant::UAT4 ? "UAT4"
                   : plan == dsdt::PlanVariant::UAT6 ? "UAT6"
                                                     : "custom"},
          {"custom_ids", custom_ids},
          {"sat", std::string(dsdt::to_string(sat))},
          {"snr_threshold_db", snr_threshold_db},
          {"nc_clusters", nc_clusters},
          {"seed", seed}};
}

TreeConfig TreeConfig::from_json(const json& j) {
  reject_unknown(j, {"kind", "plan", "custom_ids", "sat", "snr_threshold_db", "nc_clusters", "seed"}, "tree");
  TreeConfig t;
  if (j.contains("kind")) t.kind = dsdt::tree_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("plan")) t.plan = dsdt::plan_variant_from_string(j.at("plan").get<std::string>());
  if (j.contains("custom_ids")) t.custom_ids = j.at("custom_ids").get<std::vector<int>>();
  if (j.contains("sat")) t.sat = dsdt::sat_mode_from_string(j.at("sat").get<std::string>());
  t.snr_threshold_db = j.value("snr_threshold_db", t.snr_threshold_db);
  t.nc_clusters = j.value("nc_clusters", t.nc_clusters);
  t.seed = j.value("seed", t.seed);
  return t;
}

json AblationConfig::to_json() const {
  json h = json::array();
  for (auto k : held_out) h.push_back(std::string(corpus::to_string(k)));
  return {{"n_seeds", n_seeds}, {"held_out", h}, {"param_matched_single", param_matched_single}};
}

AblationConfig AblationConfig::from_json(const json& j) {
  reject_unknown(j, {"n_seeds", "held_out", "param_matched_single"}, "ablation");
  AblationConfig a;
  a.n_seeds = j.value("n_seeds", a.n_seeds);
  if (j.contains("held_out"))
    for (const auto& s : j.at("held_out")) a.held_out.push_back(corpus::noise_kind_from_string(s.get<std::string>()));
  a.param_matched_single = j.value("param_matched_single", a.param_matched_single);
  return a;
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  c.corpus.seed = derive_seed(seed, "corpus");
  c.tree.seed = derive_seed(seed, "tree");
  c.train.seed = derive_seed(seed, "components");
  c.decoder.seed = derive_seed(seed, "decoder");
  // Decoders train under the same budget as the components.
  c.decoder.train = c.train;
  c.decoder.train.seed = c.decoder.seed;
  return c;
}

void ExperimentConfig::validate() const {
  corpus.validate();
  features.validate();
  train.validate();
  nn::ModelSpec probe = component;
  probe.in_dim = probe.out_dim = 257;
  probe.validate();
  if (component.arch == nn::Arch::FC || component.arch == nn::Arch::CN)
    throw ConfigError("component arch must be DDAE, HDDAE or BLSTM");
  if (metrics.empty()) throw ConfigError("no metrics requested");
  if (out_dir.empty()) throw ConfigError("out_dir is empty");
  if (!(decoder.lambda >= 0.0)) throw ConfigError("decoder lambda must be non-negative");
  if (decoder.width <= 0 || decoder.channels <= 0) throw ConfigError("decoder width and channels must be positive");
  if (tree.kind == dsdt::TreeKind::NC) {
    if (tree.nc_clusters < 2) throw ConfigError("NC trees need at least 2 clusters");
    if (decoder.kind == ensemble::DecoderKind::BF)
      throw ConfigError("BF decoding needs attribute-defined nodes; NC clusters have none");
    if (tree.plan != dsdt::PlanVariant::UAT2 && tree.plan != dsdt::PlanVariant::Custom)
      throw ConfigError("NC trees have one layer; use plan UAT2 (all clusters) or custom");
  }
  if (tree.plan == dsdt::PlanVariant::Custom && tree.custom_ids.empty())
    throw ConfigError("custom plan needs custom_ids");
  if (ablation.n_seeds < 1) throw ConfigError("ablation n_seeds must be positive");
  if (corpus.n_test == 0) throw ConfigError("the test split is empty");
}

json ExperimentConfig::to_json() const {
  json m = json::array();
  for (auto x : metrics) m.push_back(std::string(eval::to_string(x)));
  json d = decoder.to_json();
  d.erase("train");
  return {{"corpus", corpus.to_json()},
          {"tree", tree.to_json()},
          {"features", features.to_json()},
          {"component", component.to_json()},
          {"warm_start", std::string(ensemble::to_string(warm_start))},
          {"decoder", d},
          {"train", train.to_json()},
          {"metrics", m},
          {"ablation", ablation.to_json()},
          {"out_dir", out_dir},
          {"seed", seed}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j,
                 {"corpus", "tree", "features", "component", "warm_start", "decoder", "train", "metrics", "ablation",
                  "out_dir", "seed"},
                 "config");
  ExperimentConfig c;
  try {
    if (j.contains("corpus")) c.corpus = corpus::CorpusConfig::from_json(j.at("corpus"));
    if (j.contains("tree")) c.tree = TreeConfig::from_json(j.at("tree"));
    if (j.contains("features")) c.features = ensemble::FeatureConfig::from_json(j.at("features"));
    if (j.contains("component")) c.component = nn::ModelSpec::from_json(j.at("component"));
    if (j.contains("warm_start"))
      c.warm_start = ensemble::warm_start_from_string(j.at("warm_start").get<std::string>());
    if (j.contains("decoder")) c.decoder = ensemble::DecoderOptions::from_json(j.at("decoder"));
    if (j.contains("train")) c.train = nn::TrainConfig::from_json(j.at("train"));
    if (j.contains("metrics")) {
      c.metrics.clear();
      for (const auto& m : j.at("metrics")) c.metrics.push_back(eval::metric_from_string(m.get<std::string>()));
    }
    if (j.contains("ablation")) c.ablation = AblationConfig::from_json(j.at("ablation"));
    c.out_dir = j.value("out_dir", c.out_dir);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

std::string ExperimentConfig::digest() const {
  json j = resolved().to_json();
  j.erase("out_dir");
  return sha256_hex(j.dump());
}

}  // namespace daeme::experiment
