// experiment/ablation.cpp

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

#include <algorithm>
#include <cmath>
#include <map>

#include "daeme/experiment/experiment.hpp"
#include "stages.hpp"

namespace daeme::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

eval::ScoreTable average_tables(const std::vector<eval::ScoreTable>& tables) {
  if (tables.empty()) throw Error("average_tables: no tables");
  const auto& first = tables.front();
  std::vector<eval::ScoredUtterance> cells;
  for (std::size_t r = 0; r < first.noises.size(); ++r)
    for (std::size_t c = 0; c < first.snrs.size(); ++c) {
      double sum = 0.0;
      bool present = true;
      for (const auto& t : tables) {
        if (t.noises != first.noises || t.snrs != first.snrs) throw Error("average_tables: layouts differ");
        if (!t.cells[r][c]) {
          present = false;
          break;
        }
        sum += *t.cells[r][c];
      }
      if (present) cells.push_back({first.noises[r], first.snrs[c], sum / static_cast<double>(tables.size())});
    }
  return eval::make_table(cells, first.metric, first.noises, first.snrs);
}

namespace {

struct SystemDef {
  std::string name;
  TreeConfig tree;
  ensemble::WarmStart warm = ensemble::WarmStart::Auto;
  ensemble::DecoderKind decoder = ensemble::DecoderKind::LR;
  nn::ModelSpec spec;
  bool shared_encoder = false;  ///< decoder_types: one encoder per seed
};

// Hidden width whose parameter count is closest to `target`.
int matched_width(nn::ModelSpec spec, long target) {
  int best = 1;
  long best_gap = -1;
  for (int w = 1; w <= 4096; ++w) {
    spec.width = w;
    const long gap = std::labs(parameter_count(spec) - target);
    if (best_gap < 0 || gap < best_gap) {
      best = w;
      best_gap = gap;
    }
    if (parameter_count(spec) > target) break;
  }
  return best;
}

std::vector<std::string> noise_names(const std::vector<corpus::NoiseKind>& kinds) {
  std::vector<std::string> v;
  for (auto k : kinds) v.emplace_back(corpus::to_string(k));
  return v;
}

}  // namespace

RunReport run_ablation(Suite suite, const ExperimentConfig& config, const RunOptions& opt) {
  config.validate();
  if (config.ablation.n_seeds < 3) throw ConfigError("ablation suites need at least 3 seeds");
  ExperimentConfig base = config;
  std::vector<std::string> seen, unseen;
  if (suite == Suite::seen_vs_unseen) {
    auto held = base.ablation.held_out.empty() ? base.corpus.test_noises : base.ablation.held_out;
    for (auto k : held)
      if (std::find(base.corpus.train_noises.begin(), base.corpus.train_noises.end(), k) !=
          base.corpus.train_noises.end())
        throw ConfigError("seen_vs_unseen: held-out kind '" + std::string(corpus::to_string(k)) + "' is a train kind");
    base.corpus.test_noises = base.corpus.train_noises;
    base.corpus.test_noises.insert(base.corpus.test_noises.end(), held.begin(), held.end());
    base.corpus.disjoint_noises = false;
    seen = noise_names(base.corpus.train_noises);
    unseen = noise_names(held);
  }
  if (suite == Suite::decoder_types && base.tree.kind == dsdt::TreeKind::NC)
    throw ConfigError("decoder_types includes BF, which NC trees cannot support");
  base.validate();

  std::vector<SystemDef> defs;
  const auto kind = base.decoder.kind;
  auto def = [&](std::string name, TreeConfig t, ensemble::WarmStart w, ensemble::DecoderKind d) {
    defs.push_back({std::move(name), std::move(t), w, d, base.component, false});
  };
  TreeConfig single = base.tree;
  single.kind = dsdt::TreeKind::UAT;
  single.plan = dsdt::PlanVariant::Custom;
  single.custom_ids = {0};
  json pairs = json::array();  // (b, a): H1 says b beats a
  switch (suite) {
    case Suite::UAT_vs_RT: {
      TreeConfig uat = base.tree, rt = base.tree;
      uat.kind = dsdt::TreeKind::UAT;
      rt.kind = dsdt::TreeKind::RT;
      // Warm start on for both trees so the budgets match.
      def("UAT", uat, ensemble::WarmStart::On, kind);
      def("RT", rt, ensemble::WarmStart::On, kind);
      def("single", single, ensemble::WarmStart::Off, kind);
      pairs = json::array({json::array({"UAT", "RT"}), json::array({"UAT", "single"})});
      if (base.ablation.param_matched_single) {
        nn::ModelSpec s = base.component;
        s.in_dim = s.out_dim = base.features.band_width(base.tree.sat, dsdt::Band::Low);
        const int k = base.tree.sat == dsdt::SatMode::None ? 1 : 2;
        const std::size_t nodes = base.tree.plan == dsdt::PlanVariant::UAT2   ? 2
                                  : base.tree.plan == dsdt::PlanVariant::UAT4 ? 4
                                  : base.tree.plan == dsdt::PlanVariant::UAT6 ? 6
                                                                              : base.tree.custom_ids.size();
        const long target = parameter_count(s) * static_cast<long>(nodes);
        if (k == 2 || s.arch == nn::Arch::BLSTM)
          throw ConfigError("param_matched_single supports DDAE/HDDAE components without SAT");
        nn::ModelSpec wide = base.component;
        wide.width = matched_width(s, target);
        defs.push_back({"single_W", single, ensemble::WarmStart::Off, kind, wide, false});
        pairs.push_back(json::array({"UAT", "single_W"}));
      }
      break;
    }
    case Suite::decoder_types:
      for (auto d : {ensemble::DecoderKind::BF, ensemble::DecoderKind::LR, ensemble::DecoderKind::FC,
                     ensemble::DecoderKind::CN}) {
        def(std::string(ensemble::to_string(d)), base.tree, base.warm_start, d);
        defs.back().shared_encoder = true;
      }
      pairs = json::array({json::array({"CN", "FC"}), json::array({"FC", "LR"}), json::array({"CN", "LR"})});
      break;
    case Suite::SS_vs_WD: {
      TreeConfig ss = base.tree, wd = base.tree;
      ss.sat = dsdt::SatMode::SS;
      wd.sat = dsdt::SatMode::WD;
      def("SS", ss, base.warm_start, kind);
      def("WD", wd, base.warm_start, kind);
      pairs = json::array({json::array({"WD", "SS"})});
      break;
    }
    case Suite::seen_vs_unseen:
      def("DAEME", base.tree, base.warm_start, kind);
      def("single", single, ensemble::WarmStart::Off, kind);
      pairs = json::array({json::array({"DAEME", "single"})});
      break;
  }

  const fs::path out = base.out_dir;
  fs::create_directories(out);
  RunReport rep;
  rep.config = base.resolved().to_json();
  rep.config["suite"] = std::string(to_string(suite));
  rep.config_digest = detail::key_of(rep.config);
  detail::write_text(out / "config.json", rep.config.dump(2) + "\n");

  std::vector<std::string> labels = suite == Suite::seen_vs_unseen ? std::vector<std::string>{"seen", "unseen"}
                                                                   : std::vector<std::string>{""};
  // results[system][seed]
  std::map<std::string, std::vector<SystemResult>> results;
  json per_seed = json::array();
  for (int s = 0; s < base.ablation.n_seeds; ++s) {
    ExperimentConfig c = base;
    c.seed = derive_seed(base.seed, "ablation-seed", static_cast<std::uint64_t>(s));
    c = c.resolved();
    const fs::path sd = out / ("seed_" + std::to_string(s));
    detail::Ctx ctx{opt.resume, std::max(1, opt.jobs), &rep.timing, "seed_" + std::to_string(s) + "/"};
    const auto corpus = detail::stage_corpus(c.corpus, sd / "corpus", ctx);
    json seed_entry = {{"seed", c.seed}, {"systems", json::object()}};

    std::optional<detail::TreeArt> shared_tree;
    std::optional<detail::EncoderArt> shared_enc;
    std::optional<detail::PreparedSet> shared_train, shared_test;
    for (const auto& d : defs) {
      detail::Ctx sctx = ctx;
      sctx.label = ctx.label + d.name + "/";
      TreeConfig tcfg = d.tree;
      tcfg.seed = c.tree.seed;
      const bool wd = tcfg.sat == dsdt::SatMode::WD;
      const fs::path sys_dir = sd / d.name;
      const fs::path enc_root = d.shared_encoder ? sd / "shared" : sys_dir;

      std::optional<detail::PreparedSet> own_train, own_test;
      detail::PreparedSet* train;
      detail::PreparedSet* test;
      const detail::TreeArt* tree;
      const detail::EncoderArt* enc;
      std::optional<detail::TreeArt> own_tree;
      std::optional<detail::EncoderArt> own_enc;
      if (d.shared_encoder) {
        if (!shared_enc) {
          detail::Ctx ectx = ctx;
          ectx.label = ctx.label + "shared/";
          shared_train.emplace(corpus, corpus::Split::Train, c.features, wd, ectx.jobs);
          shared_test.emplace(corpus, corpus::Split::Test, c.features, wd, ectx.jobs);
          shared_tree = detail::stage_tree(tcfg, corpus, enc_root / "tree", ectx);
          shared_enc = detail::stage_components(c, d.spec, d.warm, *shared_tree, *shared_train, enc_root / "encoder", ectx);
        }
        train = &*shared_train;
        test = &*shared_test;
        tree = &*shared_tree;
        enc = &*shared_enc;
      } else {
        own_train.emplace(corpus, corpus::Split::Train, c.features, wd, sctx.jobs);
        own_test.emplace(corpus, corpus::Split::Test, c.features, wd, sctx.jobs);
        own_tree = detail::stage_tree(tcfg, corpus, sys_dir / "tree", sctx);
        own_enc = detail::stage_components(c, d.spec, d.warm, *own_tree, *own_train, sys_dir / "encoder", sctx);
        train = &*own_train;
        test = &*own_test;
        tree = &*own_tree;
        enc = &*own_enc;
      }
      (void)tree;
      ensemble::DecoderOptions dopt = c.decoder;
      dopt.kind = d.decoder;
      const auto dec = detail::stage_decoder(dopt, *enc, *train, sys_dir / "decoder", sctx);
      const auto enh = detail::stage_enhance(*enc, dec, corpus, *test, sys_dir / "enhance", sctx);
      const auto met = detail::stage_metrics(c.metrics, enh, corpus, sys_dir / "metrics", sctx);
      auto sys = detail::assemble(d.name, *enc, dec, enh, met, corpus);
      try {
        if (suite == Suite::seen_vs_unseen) {
          detail::add_tables(sys, "seen", seen, sys_dir / "tables", "seen_", nullptr);
          detail::add_tables(sys, "unseen", unseen, sys_dir / "tables", "unseen_", nullptr);
        } else {
          detail::add_tables(sys, "", {}, sys_dir / "tables", "", nullptr);
        }
      } catch (const std::exception& e) {
        throw StageError(sctx.label + "tables", e.what());
      }
      seed_entry["systems"][d.name] = {{"mean_lps_mse", sys.mean_lps_mse},
                                       {"parameters", sys.parameters},
                                       {"encoder_digests", sys.encoder_digests}};
      results[d.name].push_back(std::move(sys));
    }
    per_seed.push_back(seed_entry);
  }

  // Seed-averaged tables and per-system summaries.
  const fs::path sum_dir = out / "summary";
  fs::create_directories(sum_dir);
  std::string mse_csv = "seed";
  for (const auto& d : defs) mse_csv += "," + d.name;
  mse_csv += "\n";
  for (int s = 0; s < base.ablation.n_seeds; ++s) {
    mse_csv += std::to_string(s);
    for (const auto& d : defs) {
      char buf[40];
      std::snprintf(buf, sizeof buf, ",%.17g", results[d.name][static_cast<std::size_t>(s)].mean_lps_mse);
      mse_csv += buf;
    }
    mse_csv += "\n";
  }
  detail::write_text(sum_dir / "lps_mse.csv", mse_csv);
  rep.artifacts.push_back((sum_dir / "lps_mse.csv").string());

  std::map<std::string, std::vector<std::pair<std::string, eval::ScoreTable>>> averaged;
  for (const auto& d : defs) {
    const auto& runs = results[d.name];
    SystemResult agg;
    agg.name = d.name;
    agg.oracle = runs.front().oracle;
    agg.parameters = runs.front().parameters;
    agg.encoder_digests = runs.front().encoder_digests;
    double mse = 0.0;
    for (const auto& r : runs) mse += r.mean_lps_mse;
    agg.mean_lps_mse = mse / static_cast<double>(runs.size());
    for (std::size_t t = 0; t < runs.front().tables.size(); ++t) {
      std::vector<eval::ScoreTable> per;
      for (const auto& r : runs) per.push_back(r.tables[t].second);
      auto avg = average_tables(per);
      const std::string& label = runs.front().tables[t].first;
      const std::string base_name = d.name + (label.empty() ? "" : "_" + label) + "_" + avg.metric;
      detail::write_text(sum_dir / (base_name + ".csv"), avg.to_csv(2));
      detail::write_text(sum_dir / (base_name + "_full.csv"), avg.to_csv(-1));
      rep.artifacts.push_back((sum_dir / (base_name + ".csv")).string());
      rep.artifacts.push_back((sum_dir / (base_name + "_full.csv")).string());
      agg.tables.emplace_back(label, avg);
    }
    for (std::size_t m = 0; m < runs.front().metrics.size(); ++m) {
      eval::MetricResult mr;
      mr.metric = runs.front().metrics[m].metric;
      for (const auto& r : runs) mr.per_utterance.insert(mr.per_utterance.end(), r.metrics[m].per_utterance.begin(),
                                                         r.metrics[m].per_utterance.end());
      double s = 0.0;
      for (double v : mr.per_utterance) s += v;
      mr.value = s / static_cast<double>(mr.per_utterance.size());
      agg.metrics.push_back(std::move(mr));
    }
    rep.systems.push_back(std::move(agg));
  }

  auto find = [&](const std::string& n) -> const SystemResult& {
    for (const auto& s : rep.systems)
      if (s.name == n) return s;
    throw Error("no system " + n);
  };
  std::string tt_csv = "b,a,label,metric,pairing,n,t,p,significant\n";
  for (const auto& pr : pairs) {
    const auto& b = find(pr[0].get<std::string>());
    const auto& a = find(pr[1].get<std::string>());
    for (std::size_t t = 0; t < b.tables.size(); ++t) {
      const auto cell = eval::ttest_tables(a.tables[t].second, b.tables[t].second);
      json e = {{"b", b.name}, {"a", a.name}, {"label", b.tables[t].first}, {"metric", b.tables[t].second.metric},
                {"pairing", "condition"}, {"result", cell.to_json()}};
      rep.ttests.push_back(e);
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,condition,%d,%.17g,%.17g,%d\n", b.name.c_str(), a.name.c_str(),
                    b.tables[t].first.c_str(), b.tables[t].second.metric.c_str(), cell.n, cell.t, cell.p,
                    cell.significant ? 1 : 0);
      tt_csv += buf;
    }
    if (suite != Suite::seen_vs_unseen) {
      for (std::size_t m = 0; m < b.metrics.size(); ++m) {
        const auto utt = eval::paired_ttest(a.metrics[m].per_utterance, b.metrics[m].per_utterance);
        const std::string metric(eval::to_string(b.metrics[m].metric));
        rep.ttests.push_back({{"b", b.name}, {"a", a.name}, {"label", ""}, {"metric", metric},
                              {"pairing", "utterance"}, {"result", utt.to_json()}});
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%s,,%s,utterance,%d,%.17g,%.17g,%d\n", b.name.c_str(), a.name.c_str(),
                      metric.c_str(), utt.n, utt.t, utt.p, utt.significant ? 1 : 0);
        tt_csv += buf;
      }
    }
  }
  detail::write_text(sum_dir / "ttests.csv", tt_csv);
  rep.artifacts.push_back((sum_dir / "ttests.csv").string());
  rep.extra = {{"suite", std::string(to_string(suite))}, {"per_seed", per_seed}};
  detail::write_text(out / "report.json", rep.to_json().dump(2) + "\n");
  return rep;
}

}  // namespace daeme::experiment
