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

// Experiment configuration, staged pipeline, resumption and ablation suites.

#include <fstream>
#include <sstream>

#include "doctest.h"

#include "daeme/experiment/experiment.hpp"
#include "test_util.hpp"

using namespace daeme;
using namespace daeme::experiment;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(const std::string& name) {
  ExperimentConfig c;
  c.corpus.n_train = 16;
  c.corpus.n_test = 24;
  c.corpus.duration_s = 0.75;
  c.corpus.train_snrs = {-5.0, 0.0, 15.0, 20.0};
  c.tree.plan = dsdt::PlanVariant::UAT2;
  c.component = nn::ModelSpec::ddae(257, 257, 1, 16);
  c.train.epochs = 1;
  c.train.batch_size = 64;
  c.out_dir = testing::scratch_dir(name).string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config JSON round trip, digest and validation") {
  ExperimentConfig c = tiny("cfg");
  c.tree.sat = dsdt::SatMode::WD;
  c.decoder.kind = ensemble::DecoderKind::FC;
  c.metrics = {eval::Metric::STOI};
  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.digest() == c.digest());

  ExperimentConfig other = c;
  other.out_dir = "/elsewhere";
  CHECK(other.digest() == c.digest());
  other.seed = 2;
  CHECK(other.digest() != c.digest());

  const auto r = c.resolved();
  CHECK(r.corpus.seed == derive_seed(c.seed, "corpus"));
  CHECK(r.decoder.train.epochs == r.train.epochs);
  CHECK(r.decoder.seed != r.train.seed);

  CHECK_THROWS_AS(ExperimentConfig::from_json({{"nonsense", 1}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"tree", {{"plan", "UAT9"}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"train", {{"epochs", "many"}}}}), ConfigError);
  ExperimentConfig nc = tiny("cfg");
  nc.tree.kind = dsdt::TreeKind::NC;
  nc.decoder.kind = ensemble::DecoderKind::BF;
  CHECK_THROWS_AS(nc.validate(), ConfigError);
  ExperimentConfig fcc = tiny("cfg");
  fcc.component.arch = nn::Arch::CN;
  CHECK_THROWS_AS(fcc.validate(), ConfigError);
}

TEST_CASE("minimal experiment runs end to end, reproducibly") {
  ExperimentConfig c = tiny("run_a");
  const auto rep = run_experiment(c);
  REQUIRE(rep.systems.size() == 1);
  const auto& s = rep.systems[0];
  CHECK(s.name == "DAEME-UAT(2)-LR");
  CHECK(s.tables.size() == 3);
  CHECK(s.tables[0].second.noises.size() == 2);
  CHECK(s.tables[0].second.snrs.size() == 6);
  CHECK(fs::exists(fs::path(c.out_dir) / "report.json"));
  for (const char* stage : {"corpus", "tree", "encoder", "decoder", "enhance", "metrics"})
    CHECK(fs::exists(fs::path(c.out_dir) / stage / "stage.json"));

  ExperimentConfig d = c;
  d.out_dir = testing::scratch_dir("run_b").string();
  run_experiment(d);
  for (const auto& e : fs::directory_iterator(fs::path(c.out_dir) / "tables"))
    CHECK(slurp(e.path()) == slurp(fs::path(d.out_dir) / "tables" / e.path().filename()));
  CHECK(rep.to_json(false)["systems"] == run_experiment(d).to_json(false)["systems"]);
}

TEST_CASE("resuming after deleting the decoder retrains only the decoder") {
  ExperimentConfig c = tiny("resume");
  const auto first = run_experiment(c);
  fs::remove_all(fs::path(c.out_dir) / "decoder");
  RunOptions opt;
  opt.resume = true;
  const auto again = run_experiment(c, opt);
  for (const auto& t : again.timing) CHECK(t.reused == (t.stage != "decoder"));
  CHECK(again.systems[0].encoder_digests == first.systems[0].encoder_digests);
  CHECK(slurp(fs::path(c.out_dir) / "tables" / "stoi_full.csv").size() > 0);

  // A changed decoder setting invalidates the decoder and everything after it.
  c.decoder.lambda = 0.5;
  const auto changed = run_experiment(c, opt);
  for (const auto& t : changed.timing)
    CHECK(t.reused == (t.stage == "corpus" || t.stage == "tree" || t.stage == "components"));
}

TEST_CASE("stage failures name the stage") {
  ExperimentConfig c = tiny("untagged");
  c.corpus.tag_attributes = false;
  try {
    run_experiment(c);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "tree");
    CHECK(std::string(e.what()).find("untagged pair") != std::string::npos);
  }
  // Earlier stages stay on disk.
  CHECK(fs::exists(fs::path(c.out_dir) / "corpus" / "manifest.json"));

  RunOptions upto;
  upto.until = Stage::Tree;
  ExperimentConfig ok = tiny("until");
  run_experiment(ok, upto);
  CHECK(fs::exists(fs::path(ok.out_dir) / "tree" / "plan.json"));
  CHECK_FALSE(fs::exists(fs::path(ok.out_dir) / "encoder"));
}

TEST_CASE("average_tables takes cell-wise means") {
  auto a = eval::make_table({{"x", 0, 0.2}, {"x", 5, 0.4}});
  auto b = eval::make_table({{"x", 0, 0.4}, {"x", 5, 0.8}});
  auto m = average_tables({a, b});
  CHECK(*m.cells[0][0] == doctest::Approx(0.6));
  CHECK(*m.cells[0][1] == doctest::Approx(0.3));
  CHECK(*m.grand_avg == doctest::Approx(0.45));
  CHECK_THROWS_AS(average_tables({a, eval::make_table({{"y", 0, 1.0}})}), Error);
}

TEST_CASE("ablation suites") {
  ExperimentConfig c = tiny("abl_uat");
  c.ablation.n_seeds = 3;

  SUBCASE("UAT_vs_RT trains three systems per seed with a parameter-matched control") {
    c.ablation.param_matched_single = true;
    const auto rep = run_ablation(Suite::UAT_vs_RT, c);
    REQUIRE(rep.systems.size() == 4);
    CHECK(rep.systems[0].name == "UAT");
    CHECK(rep.systems[1].name == "RT");
    CHECK(rep.systems[0].parameters == rep.systems[1].parameters);
    const double enc_uat = rep.systems[0].parameters - 2.0 * 258 * 257;
    const double enc_w = rep.systems[3].parameters - 1.0 * 258 * 257;
    CHECK(std::abs(enc_w - enc_uat) / enc_uat <= 0.01);
    int condition = 0;
    for (const auto& t : rep.ttests)
      if (t["pairing"] == "condition") {
        ++condition;
        CHECK(t["result"]["n"] == 12);
      }
    CHECK(condition == 9);
    CHECK(rep.extra["per_seed"].size() == 3);
    CHECK(fs::exists(fs::path(c.out_dir) / "summary" / "UAT_stoi.csv"));
    CHECK(fs::exists(fs::path(c.out_dir) / "summary" / "ttests.csv"));
    CHECK(fs::exists(fs::path(c.out_dir) / "seed_2" / "RT" / "tables" / "si_sdr.csv"));
  }

  SUBCASE("decoder_types shares one encoder across the four decoders") {
    c.out_dir = testing::scratch_dir("abl_dec").string();
    c.metrics = {eval::Metric::SI_SDR};
    const auto rep = run_ablation(Suite::decoder_types, c);
    REQUIRE(rep.systems.size() == 4);
    CHECK(rep.systems[0].oracle);
    for (const auto& seed : rep.extra["per_seed"]) {
      const auto& d = seed["systems"]["BF"]["encoder_digests"];
      for (const char* k : {"LR", "FC", "CN"}) CHECK(seed["systems"][k]["encoder_digests"] == d);
    }
  }

  SUBCASE("seen_vs_unseen emits seen and unseen tables") {
    c.out_dir = testing::scratch_dir("abl_seen").string();
    c.metrics = {eval::Metric::STOI};
    c.corpus.n_test = 48;
    const auto rep = run_ablation(Suite::seen_vs_unseen, c);
    REQUIRE(rep.systems.size() == 2);
    REQUIRE(rep.systems[0].tables.size() == 2);
    CHECK(rep.systems[0].tables[0].first == "seen");
    CHECK(rep.systems[0].tables[0].second.noises == std::vector<std::string>{"babble_proxy", "white"});
    CHECK(rep.systems[0].tables[1].second.noises == std::vector<std::string>{"car_proxy", "pink"});
  }

  SUBCASE("fewer than three seeds is a configuration error") {
    c.ablation.n_seeds = 2;
    CHECK_THROWS_AS(run_ablation(Suite::SS_vs_WD, c), ConfigError);
  }
}
