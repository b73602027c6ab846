// experiment/pipeline.cpp

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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "daeme/dsp/stft.hpp"
#include "daeme/experiment/experiment.hpp"
#include "daeme/nn/checkpoint.hpp"
#include "stages.hpp"

namespace daeme::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

namespace detail {

namespace {

json read_json(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw Error("cannot read " + p.string());
  return json::parse(f);
}

bool cached(const fs::path& dir, const std::string& key, const Ctx& ctx) {
  if (!ctx.resume || !fs::exists(dir / "stage.json")) return false;
  try {
    return read_json(dir / "stage.json").value("key", std::string{}) == key;
  } catch (const std::exception&) {
    return false;
  }
}

fs::path fresh_tmp(const fs::path& dir) {
  fs::path tmp = dir;
  tmp += ".tmp";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  return tmp;
}

// Stage outputs appear under their final name only once complete.
void commit(const fs::path& tmp, const fs::path& dir, const std::string& stage, const std::string& key) {
  write_text(tmp / "stage.json", json{{"stage", stage}, {"key", key}}.dump(2) + "\n");
  fs::remove_all(dir);
  fs::rename(tmp, dir);
}

template <typename F>
auto timed(Ctx& ctx, const std::string& stage, bool reused, F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto r = fn();
    if (ctx.timing) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ctx.timing->push_back({ctx.label + stage, s, reused});
    }
    return r;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(ctx.label + stage, e.what());
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

std::string key_of(const json& j) { return sha256_hex(j.dump()); }

const std::vector<ensemble::PreparedPair>& PreparedSet::get() {
  if (!pairs_) pairs_ = ensemble::prepare_pairs(corpus_.corpus.split(split_), fc_, with_wd_, jobs_);
  return *pairs_;
}

CorpusArt stage_corpus(const corpus::CorpusConfig& cfg, const fs::path& dir, Ctx& ctx) {
  CorpusArt a;
  a.key = key_of(cfg.to_json());
  const bool hit = cached(dir, a.key, ctx);
  a.corpus = timed(ctx, "corpus", hit, [&] {
    if (hit) return corpus::load_corpus(dir);
    corpus::Corpus c = corpus::build_corpus(cfg);
    const fs::path tmp = fresh_tmp(dir);
    corpus::write_corpus(c, tmp);
    commit(tmp, dir, "corpus", a.key);
    return c;
  });
  return a;
}

TreeArt stage_tree(const TreeConfig& cfg, const CorpusArt& corpus, const fs::path& dir, Ctx& ctx) {
  TreeArt a;
  a.key = key_of({{"corpus", corpus.key}, {"tree", cfg.to_json()}});
  const bool hit = cached(dir, a.key, ctx);
  timed(ctx, "tree", hit, [&] {
    if (hit) {
      a.tree = dsdt::Dsdt::from_json(read_json(dir / "tree.json"));
      a.plan = dsdt::PartitionPlan::from_json(read_json(dir / "plan.json"));
      return 0;
    }
    const auto pairs = corpus.corpus.split(corpus::Split::Train);
    json extra = json::object();
    switch (cfg.kind) {
      case dsdt::TreeKind::UAT: a.tree = dsdt::build_uat(pairs, cfg.snr_threshold_db); break;
      case dsdt::TreeKind::RT: a.tree = dsdt::build_rt(pairs, cfg.seed); break;
      case dsdt::TreeKind::NC: {
        const auto nc = dsdt::nc_partition(pairs, cfg.nc_clusters, cfg.seed);
        a.tree = dsdt::nc_tree(nc);
        extra = {{"wcss_history", nc.wcss_history}, {"iterations", nc.iterations}};
        break;
      }
    }
    a.plan = dsdt::select_plan(a.tree, cfg.plan, cfg.custom_ids);
    if (cfg.sat != dsdt::SatMode::None) a.plan = dsdt::attach_sat(a.plan, cfg.sat);
    const fs::path tmp = fresh_tmp(dir);
    write_text(tmp / "tree.json", a.tree.to_json().dump(2) + "\n");
    write_text(tmp / "plan.json", a.plan.to_json().dump(2) + "\n");
    if (!extra.empty()) write_text(tmp / "clustering.json", extra.dump(2) + "\n");
    commit(tmp, dir, "tree", a.key);
    return 0;
  });
  return a;
}

EncoderArt stage_components(const ExperimentConfig& cfg, const nn::ModelSpec& spec, ensemble::WarmStart warm,
                            const TreeArt& tree, PreparedSet& train, const fs::path& dir, Ctx& ctx) {
  EncoderArt a;
  a.key = key_of({{"tree", tree.key},
                  {"features", cfg.features.to_json()},
                  {"component", spec.to_json()},
                  {"warm_start", std::string(ensemble::to_string(warm))},
                  {"train", cfg.train.to_json()}});
  const bool hit = cached(dir, a.key, ctx);
  a.enc = timed(ctx, "components", hit, [&] {
    if (hit) return ensemble::load_encoder(dir);
    ensemble::ComponentOptions opt;
    opt.spec = spec;
    opt.train = cfg.train;
    opt.warm_start = warm;
    opt.jobs = ctx.jobs;
    opt.seed = cfg.train.seed;
    auto enc = ensemble::train_components(tree.tree, tree.plan, train.get(), cfg.features, opt);
    const fs::path tmp = fresh_tmp(dir);
    ensemble::save_encoder(enc, tmp);
    commit(tmp, dir, "components", a.key);
    return enc;
  });
  return a;
}

DecoderArt stage_decoder(const ensemble::DecoderOptions& opt, const EncoderArt& enc, PreparedSet& train,
                         const fs::path& dir, Ctx& ctx) {
  DecoderArt a;
  a.key = key_of({{"encoder", enc.key}, {"decoder", opt.to_json()}});
  const bool hit = cached(dir, a.key, ctx);
  a.dec = timed(ctx, "decoder", hit, [&] {
    if (hit) return ensemble::load_decoder(dir);
    // BF carries no parameters and needs no training data.
    auto dec = opt.kind == ensemble::DecoderKind::BF ? ensemble::train_decoder(enc.enc, {}, opt, ctx.jobs)
                                                       : ensemble::train_decoder(enc.enc, train.get(), opt, ctx.jobs);
    const fs::path tmp = fresh_tmp(dir);
    ensemble::save_decoder(dec, tmp);
    commit(tmp, dir, "decoder", a.key);
    return dec;
  });
  return a;
}

EnhanceArt stage_enhance(const EncoderArt& enc, const DecoderArt& dec, const CorpusArt& corpus, PreparedSet& test,
                         const fs::path& dir, Ctx& ctx) {
  EnhanceArt a;
  a.key = key_of({{"decoder", dec.key}, {"corpus", corpus.key}});
  for (const auto* p : corpus.corpus.split(corpus::Split::Test)) a.ids.push_back(p->id);
  const bool hit = cached(dir, a.key, ctx);
  timed(ctx, "enhance", hit, [&] {
    const std::size_t n = a.ids.size();
    a.enhanced.resize(n);
    a.lps_mse.resize(n);
    if (hit) {
      for (std::size_t i = 0; i < n; ++i) a.enhanced[i] = corpus::wav_read(dir / "wav" / (a.ids[i] + ".wav"));
      std::ifstream f(dir / "lps_mse.csv");
      std::string line;
      std::getline(f, line);
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(f, line)) throw Error("truncated lps_mse.csv");
        const auto cells = split_csv(line);
        if (cells.size() != 2 || cells[0] != a.ids[i]) throw Error("lps_mse.csv does not match the test split");
        a.lps_mse[i] = std::stod(cells[1]);
      }
      return 0;
    }
    ensemble::DaemeSystem sys{enc.enc, dec.dec, {}};
    const auto& pairs = test.get();
    parallel_for(n, ctx.jobs, [&](std::size_t i) {
      const auto& p = pairs[i];
      dsp::LpsFeatures lps = p.noisy.lps;
      lps.frames = ensemble::enhance_features(sys, p.noisy, &p.tag);
      a.lps_mse[i] = (lps.frames - p.clean.lps.frames).squaredNorm() / static_cast<double>(lps.frames.size());
      a.enhanced[i] = corpus::quantized(dsp::stft_synthesize(lps, p.noisy.phase));
    });
    const fs::path tmp = fresh_tmp(dir);
    fs::create_directories(tmp / "wav");
    std::string csv = "id,lps_mse\n";
    for (std::size_t i = 0; i < n; ++i) {
      corpus::wav_write(a.enhanced[i], tmp / "wav" / (a.ids[i] + ".wav"));
      csv += a.ids[i] + "," + fmt17(a.lps_mse[i]) + "\n";
    }
    write_text(tmp / "lps_mse.csv", csv);
    commit(tmp, dir, "enhance", a.key);
    return 0;
  });
  return a;
}

std::vector<eval::MetricResult> stage_metrics(const std::vector<eval::Metric>& metrics, const EnhanceArt& enh,
                                              const CorpusArt& corpus, const fs::path& dir, Ctx& ctx) {
  json names = json::array();
  for (auto m : metrics) names.push_back(std::string(eval::to_string(m)));
  const std::string key = key_of({{"enhance", enh.key}, {"metrics", names}});
  const bool hit = cached(dir, key, ctx);
  return timed(ctx, "metrics", hit, [&] {
    const auto test = corpus.corpus.split(corpus::Split::Test);
    std::vector<eval::MetricResult> out(metrics.size());
    if (hit) {
      std::ifstream f(dir / "per_utterance.csv");
      std::string line;
      std::getline(f, line);
      for (std::size_t m = 0; m < metrics.size(); ++m) out[m].metric = metrics[m];
      for (std::size_t i = 0; i < test.size(); ++i) {
        if (!std::getline(f, line)) throw Error("truncated per_utterance.csv");
        const auto cells = split_csv(line);
        if (cells.size() != 3 + metrics.size() || cells[0] != test[i]->id)
          throw Error("per_utterance.csv does not match the test split");
        for (std::size_t m = 0; m < metrics.size(); ++m) out[m].per_utterance.push_back(std::stod(cells[3 + m]));
      }
      for (auto& r : out) {
        double s = 0.0;
        for (double v : r.per_utterance) s += v;
        r.value = s / static_cast<double>(r.per_utterance.size());
      }
      return out;
    }
    std::vector<const corpus::Waveform*> clean, proc;
    for (std::size_t i = 0; i < test.size(); ++i) {
      clean.push_back(&test[i]->clean);
      proc.push_back(&enh.enhanced[i]);
    }
    for (std::size_t m = 0; m < metrics.size(); ++m) out[m] = eval::evaluate(metrics[m], clean, proc, ctx.jobs);
    std::string csv = "id,noise,snr_db";
    for (const auto& n : names) csv += "," + n.get<std::string>();
    csv += "\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
      csv += test[i]->id + "," + test[i]->tag.noise_id + "," + fmt17(test[i]->tag.snr_db.value_or(0.0));
      for (const auto& r : out) csv += "," + fmt17(r.per_utterance[i]);
      csv += "\n";
    }
    const fs::path tmp = fresh_tmp(dir);
    write_text(tmp / "per_utterance.csv", csv);
    commit(tmp, dir, "metrics", key);
    return out;
  });
}

SystemResult assemble(const std::string& name, const EncoderArt& enc, const DecoderArt& dec, const EnhanceArt& enh,
                      const std::vector<eval::MetricResult>& metrics, const CorpusArt& corpus) {
  SystemResult s;
  s.name = name;
  s.oracle = dec.dec.kind == ensemble::DecoderKind::BF;
  for (const auto& c : enc.enc.components) s.parameters += static_cast<long>(c.model.num_parameters());
  if (dec.dec.kind == ensemble::DecoderKind::LR) s.parameters += static_cast<long>(dec.dec.W.size());
  if (dec.dec.net) s.parameters += static_cast<long>(dec.dec.net->num_parameters());
  s.encoder_digests = ensemble::encoder_digests(enc.enc);
  s.ids = enh.ids;
  for (const auto* p : corpus.corpus.split(corpus::Split::Test))
    s.keys.push_back({p->tag.noise_id, p->tag.snr_db.value_or(0.0), 0.0});
  s.metrics = metrics;
  s.lps_mse = enh.lps_mse;
  double t = 0.0;
  for (double v : s.lps_mse) t += v;
  s.mean_lps_mse = s.lps_mse.empty() ? 0.0 : t / static_cast<double>(s.lps_mse.size());
  return s;
}

void add_tables(SystemResult& sys, const std::string& label, const std::vector<std::string>& noises,
                const fs::path& dir, const std::string& prefix, std::vector<std::string>* artifacts) {
  fs::create_directories(dir);
  for (const auto& m : sys.metrics) {
    std::vector<eval::ScoredUtterance> rows;
    for (std::size_t i = 0; i < sys.keys.size(); ++i) {
      if (!noises.empty() && std::find(noises.begin(), noises.end(), sys.keys[i].noise) == noises.end()) continue;
      rows.push_back({sys.keys[i].noise, sys.keys[i].snr_db, m.per_utterance[i]});
    }
    auto table = eval::make_table(rows, std::string(eval::to_string(m.metric)));
    const std::string base = prefix + std::string(eval::to_string(m.metric));
    write_text(dir / (base + ".csv"), table.to_csv(2));
    write_text(dir / (base + "_full.csv"), table.to_csv(-1));
    if (artifacts) {
      artifacts->push_back((dir / (base + ".csv")).string());
      artifacts->push_back((dir / (base + "_full.csv")).string());
    }
    sys.tables.emplace_back(label, std::move(table));
  }
}

}  // namespace detail

json SystemResult::to_json() const {
  json m = json::object();
  for (const auto& r : metrics) m[std::string(eval::to_string(r.metric))] = r.value;
  json t = json::array();
  for (const auto& [label, table] : tables) {
    json e = table.to_json();
    e["label"] = label;
    t.push_back(e);
  }
  return {{"name", name},         {"oracle", oracle},          {"parameters", parameters},
          {"encoder_digests", encoder_digests}, {"mean_metrics", m}, {"mean_lps_mse", mean_lps_mse},
          {"tables", t}};
}

json RunReport::to_json(bool with_timing) const {
  json s = json::array();
  for (const auto& x : systems) s.push_back(x.to_json());
  json j = {{"config", config}, {"config_digest", config_digest}, {"systems", s},
            {"ttests", ttests}, {"extra", extra},                 {"artifacts", artifacts}};
  if (with_timing) {
    json t = json::array();
    for (const auto& x : timing) t.push_back({{"stage", x.stage}, {"seconds", x.seconds}, {"reused", x.reused}});
    j["timing"] = t;
  }
  return j;
}

long parameter_count(const nn::ModelSpec& spec) { return static_cast<long>(nn::Model(spec, 0).num_parameters()); }

namespace {

std::string system_name(const ExperimentConfig& c) {
  std::string n = "DAEME-" + std::string(dsdt::to_string(c.tree.kind));
  switch (c.tree.plan) {
    case dsdt::PlanVariant::UAT2: n += "(2)"; break;
    case dsdt::PlanVariant::UAT4: n += "(4)"; break;
    case dsdt::PlanVariant::UAT6: n += "(6)"; break;
    case dsdt::PlanVariant::Custom: n += "(custom)"; break;
  }
  if (c.tree.sat != dsdt::SatMode::None) n += "+" + std::string(dsdt::to_string(c.tree.sat));
  return n + "-" + std::string(ensemble::to_string(c.decoder.kind));
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config, const RunOptions& opt) {
  config.validate();
  const ExperimentConfig cfg = config.resolved();
  const fs::path out = cfg.out_dir;
  fs::create_directories(out);
  RunReport rep;
  rep.config = cfg.to_json();
  rep.config_digest = cfg.digest();
  detail::write_text(out / "config.json", rep.config.dump(2) + "\n");

  detail::Ctx ctx{opt.resume, std::max(1, opt.jobs), &rep.timing, ""};
  auto finish = [&] {
    detail::write_text(out / "report.json", rep.to_json().dump(2) + "\n");
    return rep;
  };
  const auto corpus = detail::stage_corpus(cfg.corpus, out / "corpus", ctx);
  rep.artifacts.push_back((out / "corpus").string());
  if (opt.until == Stage::Corpus) return finish();
  const auto tree = detail::stage_tree(cfg.tree, corpus, out / "tree", ctx);
  rep.artifacts.push_back((out / "tree").string());
  if (opt.until == Stage::Tree) return finish();

  const bool wd = cfg.tree.sat == dsdt::SatMode::WD;
  detail::PreparedSet train(corpus, corpus::Split::Train, cfg.features, wd, ctx.jobs);
  detail::PreparedSet test(corpus, corpus::Split::Test, cfg.features, wd, ctx.jobs);
  const auto enc = detail::stage_components(cfg, cfg.component, cfg.warm_start, tree, train, out / "encoder", ctx);
  rep.artifacts.push_back((out / "encoder").string());
  if (opt.until == Stage::Components) return finish();
  const auto dec = detail::stage_decoder(cfg.decoder, enc, train, out / "decoder", ctx);
  rep.artifacts.push_back((out / "decoder").string());
  if (opt.until == Stage::Decoder) return finish();
  const auto enh = detail::stage_enhance(enc, dec, corpus, test, out / "enhance", ctx);
  rep.artifacts.push_back((out / "enhance").string());
  if (opt.until == Stage::Enhance) return finish();
  const auto met = detail::stage_metrics(cfg.metrics, enh, corpus, out / "metrics", ctx);
  rep.artifacts.push_back((out / "metrics").string());
  auto sys = detail::assemble(system_name(cfg), enc, dec, enh, met, corpus);
  if (opt.until == Stage::Metrics) {
    rep.systems.push_back(std::move(sys));
    return finish();
  }
  try {
    detail::add_tables(sys, "", {}, out / "tables", "", &rep.artifacts);
  } catch (const std::exception& e) {
    throw StageError("tables", e.what());
  }
  rep.systems.push_back(std::move(sys));
  return finish();
}

}  // namespace daeme::experiment
