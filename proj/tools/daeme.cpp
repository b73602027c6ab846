// tools/daeme.cpp

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
// Command line front end: each subcommand runs the pipeline up to its stage.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "daeme/experiment/experiment.hpp"

using namespace daeme;
using namespace daeme::experiment;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool resume = false;
  int jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (JSON)");
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)")->each([&c](const std::string&) {
    c.seed_set = true;
  });
  cmd->add_option("--out", c.out, "output directory (overrides the config)");
  cmd->add_flag("--resume", c.resume, "reuse completed stages whose inputs match");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config);
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

void print_summary(const RunReport& rep) {
  for (const auto& s : rep.systems) {
    std::printf("%s%s  params=%ld  lps_mse=%.4f", s.name.c_str(), s.oracle ? " [oracle]" : "", s.parameters,
                s.mean_lps_mse);
    for (const auto& m : s.metrics) std::printf("  %s=%.4f", std::string(eval::to_string(m.metric)).c_str(), m.value);
    std::printf("\n");
  }
  for (const auto& t : rep.ttests)
    std::printf("t-test %s > %s [%s%s%s, %s]: t=%s p=%.3g%s\n", t["b"].get<std::string>().c_str(),
                t["a"].get<std::string>().c_str(), t["metric"].get<std::string>().c_str(),
                t["label"].get<std::string>().empty() ? "" : " ", t["label"].get<std::string>().c_str(),
                t["pairing"].get<std::string>().c_str(), t["result"]["t"].dump().c_str(),
                t["result"]["p"].get<double>(), t["result"]["significant"].get<bool>() ? " *" : "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAEME speech enhancement experiments"};
  app.require_subcommand(1);
  Common common;
  std::string suite;
  int seeds = 0;

  struct Sub {
    const char* name;
    const char* help;
    Stage until;
  };
  const Sub subs[] = {{"corpus", "synthesize the paired corpus", Stage::Corpus},
                      {"tree", "build the decision tree and partition plan", Stage::Tree},
                      {"train", "train the encoder components and the decoder", Stage::Decoder},
                      {"enhance", "enhance the test split", Stage::Enhance},
                      {"eval", "score the enhanced test split and write tables", Stage::Tables},
                      {"report", "run the whole pipeline and print the report", Stage::Tables}};
  std::vector<std::pair<CLI::App*, Stage>> cmds;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, common);
    cmds.emplace_back(cmd, s.until);
  }
  auto* abl = app.add_subcommand("ablation", "run an ablation suite over several seeds");
  add_common(abl, common);
  abl->add_option("--suite", suite, "UAT_vs_RT | decoder_types | SS_vs_WD | seen_vs_unseen")->required();
  abl->add_option("--seeds", seeds, "number of seeds (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = load(common);
    RunOptions opt;
    opt.resume = common.resume;
    opt.jobs = common.jobs;
    if (abl->parsed()) {
      if (seeds > 0) cfg.ablation.n_seeds = seeds;
      print_summary(run_ablation(suite_from_string(suite), cfg, opt));
      return 0;
    }
    for (const auto& [cmd, until] : cmds) {
      if (!cmd->parsed()) continue;
      opt.until = until;
      const RunReport rep = run_experiment(cfg, opt);
      if (cmd->get_name() == "report" || cmd->get_name() == "eval") print_summary(rep);
      std::printf("output: %s\n", cfg.out_dir.c_str());
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const StageError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
