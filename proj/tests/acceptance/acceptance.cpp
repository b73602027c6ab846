// acceptance.cpp

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
// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails. The ordering criteria train full desk-scale suites;
// --resume reuses stage outputs already present under --work.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <functional>
#include <optional>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "daeme/corpus/corpus.hpp"
#include "daeme/dsp/bands.hpp"
#include "daeme/dsp/stft.hpp"
#include "daeme/dsp/wavelet.hpp"
#include "daeme/ensemble/ensemble.hpp"
#include "daeme/eval/metrics.hpp"
#include "daeme/experiment/experiment.hpp"
#include "daeme/nn/model.hpp"
#include "daeme/nn/train.hpp"

using namespace daeme;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

corpus::Waveform random_wave(std::size_t n, Rng& rng) {
  corpus::Waveform w;
  w.samples.resize(n);
  const double scale = rng.uniform(0.01, 1.0);
  for (double& s : w.samples) s = scale * rng.normal();
  return w;
}

Matrix randn(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

// ---------------------------------------------------------------------------

Outcome dsp_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double stft_min = 1e300, wd_max = 0.0;
  bool split_exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2048 + rng.index(30000);
    const corpus::Waveform w = random_wave(n, rng);

    auto [lps, phase] = dsp::stft_analyze(w);
    const corpus::Waveform r = dsp::stft_synthesize(lps, phase);
    // The first and last half-window lack full overlap-add coverage.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 256; i + 256 < n; ++i) {
      num += w.samples[i] * w.samples[i];
      den += (w.samples[i] - r.samples[i]) * (w.samples[i] - r.samples[i]);
    }
    stft_min = std::min(stft_min, den > 0.0 ? 10.0 * std::log10(num / den) : 300.0);

    const corpus::Waveform b = dsp::wavelet_merge(dsp::wavelet_split(w));
    for (std::size_t i = 0; i < n; ++i) wd_max = std::max(wd_max, std::abs(b.samples[i] - w.samples[i]));

    auto [lo, hi] = dsp::spectral_split(lps.frames);
    const Matrix m = dsp::spectral_merge(lo, hi);
    split_exact = split_exact && (m.array() == lps.frames.array()).all();
  }
  const double secs = seconds_since(t0);
  return {stft_min >= 60.0 && wd_max <= 1e-8 && split_exact && secs < 10.0,
          fmt("stft min %.1f dB (>= 60), bior3.7 max err %.2e (<= 1e-8), split/merge %s, %.1f s (< 10)", stft_min,
              wd_max, split_exact ? "exact" : "NOT exact", secs)};
}

// Central differences restricted to parameter blocks whose name starts with
// one of `prefixes`.
double block_grad_check(const nn::Model& model, const Matrix& x, const Matrix& y,
                        const std::vector<std::string>& prefixes, int per_group, int* coords) {
  Vector grad = Vector::Zero(model.num_parameters());
  const double scale = 1.0 / static_cast<double>(y.size());
  model.accumulate_gradient(x, y, scale, grad);
  nn::Model probe = model;
  auto loss = [&]() { return (probe.forward(x) - y).squaredNorm() * scale; };
  std::vector<Eigen::Index> idx;
  for (const auto& b : model.blocks())
    for (const auto& p : prefixes)
      if (b.name.rfind(p, 0) == 0)
        for (Eigen::Index k = 0; k < b.size(); ++k) idx.push_back(b.offset + k);
  Rng rng(17);
  shuffle(std::span<Eigen::Index>(idx), rng);
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(per_group)));
  double worst = 0.0;
  const double eps = 1e-5;
  for (Eigen::Index k : idx) {
    const double orig = probe.parameters()[k];
    probe.parameters()[k] = orig + eps;
    const double up = loss();
    probe.parameters()[k] = orig - eps;
    const double down = loss();
    probe.parameters()[k] = orig;
    const double numeric = (up - down) / (2.0 * eps);
    worst = std::max(worst, std::abs(numeric - grad[k]) / std::max(std::abs(numeric) + std::abs(grad[k]), 1e-8));
  }
  *coords += static_cast<int>(idx.size());
  return worst;
}

Outcome gradient_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  int coords = 0;
  nn::Model dense(nn::ModelSpec::hddae(10, 6, 4, 16), 3);
  const double e_dense = block_grad_check(dense, randn(12, 10, 1), randn(12, 6, 2), {""}, 300, &coords);
  nn::Model blstm(nn::ModelSpec::blstm(5, 4, 2, 6), 5);
  const Matrix bx = randn(9, 5, 3), by = randn(9, 4, 4);
  const double e_cell = block_grad_check(blstm, bx, by, {"blstm"}, 400, &coords);
  const double e_proj = block_grad_check(blstm, bx, by, {"proj"}, 200, &coords);
  nn::Model cn(nn::ModelSpec::cn(6, 3, 4, 8), 3);
  const double e_conv = block_grad_check(cn, randn(15, 6, 5), randn(15, 3, 6), {"conv"}, 300, &coords);
  const double worst = std::max({e_dense, e_cell, e_proj, e_conv});
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 60.0 && coords >= 800,
          fmt("max rel err dense %.1e, lstm cell %.1e, blstm projection %.1e, conv1d %.1e (<= 1e-4) over %d "
              "coordinates, %.1f s (< 60)",
              e_dense, e_cell, e_proj, e_conv, coords, secs)};
}

Outcome lr_oracle() {
  const Eigen::Index T = 2000, D = 64;
  std::vector<Matrix> branches;
  for (int b = 0; b < 3; ++b) branches.push_back(randn(T, D, 10 + b));
  const Matrix z = ensemble::concat_columns(branches);
  Matrix x = 0.5 * branches[0].leftCols(D) + 0.3 * branches[1].array().tanh().matrix() + 0.1 * randn(T, D, 20);
  double worst = 0.0;
  for (double lambda : {0.0, 1e-3, 1.0}) {
    const auto dec = ensemble::fit_lr_decoder(z, x, lambda);
    Matrix y(T, 3 * D + 1);
    y << z, Matrix::Ones(T, 1);
    const Matrix gram = y.transpose() * y + lambda * Matrix::Identity(3 * D + 1, 3 * D + 1);
    const Matrix oracle = gram.fullPivLu().solve(y.transpose() * x);
    worst = std::max(worst, (dec.W - oracle).norm() / oracle.norm());
  }
  auto resid = [&](std::size_t k) {
    std::vector<Matrix> used(branches.begin(), branches.begin() + static_cast<long>(k));
    const Matrix f = ensemble::concat_columns(used);
    return (ensemble::decode(ensemble::fit_lr_decoder(f, x, 0.0), f) - x).squaredNorm();
  };
  const double r1 = resid(1), r2 = resid(2), r3 = resid(3);
  const bool nested = r2 <= r1 * (1 + 1e-12) && r3 <= r2 * (1 + 1e-12);
  return {worst <= 1e-8 && nested,
          fmt("max relative deviation from dense solve %.2e (<= 1e-8); residuals %.6g >= %.6g >= %.6g with lambda 0",
              worst, r1, r2, r3)};
}

Outcome mixing_exactness() {
  double worst = 0.0;
  int checked = 0;
  for (auto kind : {corpus::NoiseKind::White, corpus::NoiseKind::Pink, corpus::NoiseKind::BabbleProxy,
                    corpus::NoiseKind::CarProxy})
    for (int snr = -10; snr <= 20; ++snr) {
      corpus::VoiceSpec vs;
      vs.speaker = snr % 2 ? corpus::SpeakerClass::A : corpus::SpeakerClass::B;
      vs.seed = static_cast<std::uint64_t>(snr + 100);
      const auto clean = corpus::synth_voice(vs);
      const auto noise = corpus::synth_noise(kind, 1.5, static_cast<std::uint64_t>(snr + 200));
      const auto noisy = corpus::mix_at_snr(clean, noise, snr, static_cast<std::size_t>(snr + 10) * 37);
      worst = std::max(worst, std::abs(corpus::measured_snr_db(clean, noisy) - snr));
      ++checked;
    }
  // Stored corpus pairs after clipping protection and 16-bit rounding.
  corpus::CorpusConfig cc;
  cc.n_train = 62;
  cc.n_test = 0;
  cc.seed = 5;
  const auto c = corpus::build_corpus(cc);
  double stored = 0.0;
  std::set<double> grid;
  for (const auto& p : c.pairs) {
    stored = std::max(stored, std::abs(corpus::measured_snr_db(p.clean, p.noisy) - *p.tag.snr_db));
    grid.insert(*p.tag.snr_db);
  }
  return {worst <= 0.01 && stored <= 0.01,
          fmt("max |measured - target| %.2e dB over %d mixes (-10..20 dB, 4 kinds); %.2e dB over %zu stored pairs "
              "(%zu grid points) (<= 0.01)",
              worst, checked, stored, c.pairs.size(), grid.size())};
}

// ---------------------------------------------------------------------------
// Desk-scale suites.

experiment::ExperimentConfig suite_config(const fs::path& out) {
  experiment::ExperimentConfig c;
  c.corpus.n_train = 200;
  // Eight utterances per noise x SNR cell.
  c.corpus.n_test = 96;
  c.corpus.duration_s = 1.0;
  c.tree.kind = dsdt::TreeKind::UAT;
  c.tree.plan = dsdt::PlanVariant::UAT4;
  c.decoder.kind = ensemble::DecoderKind::CN;
  c.train.epochs = 20;
  c.train.batch_size = 64;
  c.metrics = {eval::Metric::STOI, eval::Metric::SI_SDR};
  c.ablation.n_seeds = 5;
  c.seed = 1;
  c.out_dir = out.string();
  return c;
}

double grand(const experiment::RunReport& r, const std::string& sys, const std::string& metric) {
  for (const auto& s : r.systems)
    if (s.name == sys)
      for (const auto& [label, t] : s.tables)
        if (t.metric == metric && t.grand_avg) return *t.grand_avg;
  throw Error("acceptance: no " + metric + " table for " + sys);
}

const nlohmann::json& ttest(const experiment::RunReport& r, const std::string& b, const std::string& a,
                            const std::string& metric, const std::string& pairing) {
  for (const auto& e : r.ttests)
    if (e["b"] == b && e["a"] == a && e["metric"] == metric && e["pairing"] == pairing) return e["result"];
  throw Error("acceptance: no t-test " + b + " > " + a);
}

Outcome uat_ordering(const experiment::RunReport& r, double secs, int jobs) {
  bool ok = true;
  std::string d;
  for (std::string m : {"stoi", "si_sdr"}) {
    const double u = grand(r, "UAT", m), rt = grand(r, "RT", m), s = grand(r, "single", m);
    const auto& tt = ttest(r, "UAT", "single", m, "utterance");
    const double p = tt["p"].get<double>();
    ok = ok && u >= rt && u >= s && p < 0.01;
    d += fmt("%s UAT %.4f %s RT %.4f, %s single %.4f, p(UAT>single) %.2g n=%d; ", m.c_str(), u, u >= rt ? ">=" : "<",
             rt, u >= s ? ">=" : "<", s, p, tt["n"].get<int>());
  }
  d += fmt("%.0f s on %d job(s)", secs, jobs);
  return {ok, d};
}

Outcome decoder_ordering(const experiment::RunReport& r) {
  int good = 0;
  std::string d;
  for (const auto& s : r.extra["per_seed"]) {
    const auto& sy = s["systems"];
    const double cn = sy["CN"]["mean_lps_mse"], fc = sy["FC"]["mean_lps_mse"], lr = sy["LR"]["mean_lps_mse"];
    const double bf = sy["BF"]["mean_lps_mse"];
    good += cn <= fc && fc <= lr;
    d += fmt("[CN %.3f FC %.3f LR %.3f | BF %.3f] ", cn, fc, lr, bf);
  }
  return {good >= 4, fmt("CN <= FC <= LR on %d of %zu seeds (>= 4); test LPS MSE ", good,
                         r.extra["per_seed"].size()) + d};
}

Outcome conditional_overfitting(const fs::path& suite_dir, int n_seeds) {
  // mse[component node][evaluated node], summed over seeds.
  std::map<std::string, std::map<std::string, double>> mse;
  std::map<std::string, std::vector<std::string>> siblings;
  for (int s = 0; s < n_seeds; ++s) {
    const fs::path sd = suite_dir / ("seed_" + std::to_string(s));
    const auto corpus = corpus::load_corpus(sd / "corpus");
    const auto enc = ensemble::load_encoder(sd / "UAT" / "encoder");
    const auto train = ensemble::prepare_pairs(corpus.split(corpus::Split::Train), enc.features,
                                               enc.plan.sat_mode == dsdt::SatMode::WD);
    std::map<std::string, const ensemble::PreparedPair*> by_id;
    for (const auto& p : train) by_id[p.id] = &p;
    for (const auto& comp : enc.components) {
      const auto& own = enc.tree.node(comp.branch.node);
      for (int other : enc.plan.node_ids) {
        const auto& n = enc.tree.node(other);
        if (n.parent != own.parent) continue;
        std::vector<const ensemble::PreparedPair*> subset;
        for (const auto& id : n.members) subset.push_back(by_id.at(id));
        mse[own.name][n.name] += ensemble::component_mse(enc, comp, subset) / n_seeds;
        if (s == 0 && other != own.id) siblings[own.name].push_back(n.name);
      }
    }
  }
  bool ok = !mse.empty();
  std::string d;
  for (const auto& [name, row] : mse) {
    const double own = row.at(name);
    d += fmt("%s own %.3f", name.c_str(), own);
    for (const auto& sib : siblings[name]) {
      ok = ok && own <= row.at(sib);
      d += fmt(" vs %s %.3f", sib.c_str(), row.at(sib));
    }
    d += "; ";
  }
  return {ok, "seed-averaged component MSE " + d};
}

Outcome bf_exactness(const fs::path& suite_dir) {
  const auto enc = ensemble::load_encoder(suite_dir / "seed_0" / "UAT" / "encoder");
  corpus::CorpusConfig cc;
  cc.n_train = 8;
  cc.n_test = 50;
  cc.duration_s = 1.0;
  cc.seed = 424242;
  const auto c = corpus::build_corpus(cc);
  int identical = 0, total = 0;
  std::set<std::string> used;
  for (const auto* p : c.split(corpus::Split::Test)) {
    const auto a = ensemble::analyze(p->noisy, enc.features, false);
    const auto outs = ensemble::node_outputs(enc, a, ensemble::encode(enc, a));
    const Matrix bf = ensemble::decode_bf(enc, outs, p->tag);

    // The deepest plan node whose whole path matches, evaluated directly.
    int best = -1;
    for (int id : enc.plan.node_ids)
      if (enc.tree.path_matches(id, p->tag) && (best < 0 || enc.tree.node(id).depth > enc.tree.node(best).depth))
        best = id;
    const ensemble::ComponentModel* comp = nullptr;
    for (const auto& cm : enc.components)
      if (cm.branch.node == best) comp = &cm;
    if (!comp) throw Error("acceptance: no component for matched node");
    const Matrix band = comp->apply(ensemble::band_features(a, dsdt::SatMode::None, dsdt::Band::Full, enc.features),
                                    enc.features.context);
    const Matrix ref = ensemble::merge_node_output(a, dsdt::SatMode::None, band, band, enc.features);
    ++total;
    if (bf.rows() == ref.rows() && bf.cols() == ref.cols() &&
        std::memcmp(bf.data(), ref.data(), sizeof(double) * static_cast<std::size_t>(bf.size())) == 0)
      ++identical;
    used.insert(enc.tree.node(best).name);
  }
  return {identical == total && total == 50,
          fmt("%d of %d test utterances bit-identical to the matched component output, %zu distinct nodes selected",
              identical, total, used.size())};
}

Outcome stoi_sanity() {
  double self_min = 1.0;
  int inversions_worst = 0;
  double inversion_size = 0.0;
  double gain_dev = 0.0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    corpus::VoiceSpec vs;
    vs.speaker = s % 2 ? corpus::SpeakerClass::B : corpus::SpeakerClass::A;
    vs.duration_s = 3.0;
    vs.seed = 300 + s;
    const auto x = corpus::synth_voice(vs);
    self_min = std::min(self_min, eval::stoi(x, x));
    const auto kind = std::array{corpus::NoiseKind::White, corpus::NoiseKind::Pink, corpus::NoiseKind::BabbleProxy,
                                 corpus::NoiseKind::CarProxy}[s];
    const auto n = corpus::synth_noise(kind, 3.0, 400 + s);
    std::vector<double> sweep;
    for (double snr : {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0}) sweep.push_back(eval::stoi(x, corpus::mix_at_snr(x, n, snr)));
    int inv = 0;
    for (std::size_t i = 1; i < sweep.size(); ++i)
      if (sweep[i] < sweep[i - 1]) {
        ++inv;
        inversion_size = std::max(inversion_size, sweep[i - 1] - sweep[i]);
      }
    inversions_worst = std::max(inversions_worst, inv);
    const auto y = corpus::mix_at_snr(x, n, 0.0);
    const double ref = eval::stoi(x, y);
    for (double g : {0.01, 0.5, 3.0, 100.0}) {
      corpus::Waveform yg = y;
      for (double& v : yg.samples) v *= g;
      gain_dev = std::max(gain_dev, std::abs(eval::stoi(x, yg) - ref));
    }
  }
  const bool ok = self_min >= 0.99 && inversions_worst <= 1 && inversion_size <= 0.01 && gain_dev <= 1e-6;
  return {ok, fmt("min stoi(x,x) %.6f (>= 0.99); worst sweep has %d inversion(s), largest %.4f (<= 1 of <= 0.01); "
                  "gain deviation %.1e (<= 1e-6)",
                  self_min, inversions_worst, inversion_size, gain_dev)};
}

std::map<std::string, std::string> csv_files(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".csv") {
      std::ifstream f(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << f.rdbuf();
      out[fs::relative(e.path(), root).string()] = ss.str();
    }
  return out;
}

Outcome reproducibility(const fs::path& work, int jobs) {
  experiment::ExperimentConfig c;
  c.corpus.n_train = 16;
  c.corpus.n_test = 24;
  c.corpus.duration_s = 0.75;
  c.corpus.train_snrs = {-5, 0, 15, 20};
  c.tree.plan = dsdt::PlanVariant::UAT2;
  c.component = nn::ModelSpec::ddae(257, 257, 1, 16);
  c.train.epochs = 1;
  c.ablation.n_seeds = 3;
  int files = 0;
  bool same = true;
  for (int variant = 0; variant < 2; ++variant) {
    std::map<std::string, std::string> runs[2];
    for (int r = 0; r < 2; ++r) {
      const fs::path out = work / "repro" / (std::to_string(variant) + "_" + std::to_string(r));
      fs::remove_all(out);
      c.out_dir = out.string();
      experiment::RunOptions opt;
      opt.jobs = r == 0 ? 1 : jobs;
      if (variant == 0) {
        experiment::run_experiment(c, opt);
      } else {
        experiment::run_ablation(experiment::Suite::UAT_vs_RT, c, opt);
      }
      runs[r] = csv_files(out);
    }
    same = same && runs[0] == runs[1] && !runs[0].empty();
    files += static_cast<int>(runs[0].size());
  }
  return {same, fmt("%d CSV files from a pipeline run and an ablation suite %s on rerun", files,
                    same ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAEME acceptance criteria"};
  std::string work = "acceptance_work";
  bool resume = false;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<int> only;
  app.add_option("--work", work, "scratch directory for the desk-scale suites");
  app.add_flag("--resume", resume, "reuse stage outputs already under --work");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  auto want = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };
  const char* names[] = {"",
                         "DSP exactness",
                         "gradient correctness",
                         "LR decoder oracle",
                         "mixing exactness",
                         "UAT vs RT ordering",
                         "decoder ordering",
                         "conditional overfitting",
                         "BF exactness",
                         "STOI sanity",
                         "reproducibility"};
  int failed = 0;
  auto report = [&](int k, const std::function<Outcome()>& f) {
    if (!want(k)) return;
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, names[k], o.detail.c_str());
    std::fflush(stdout);
  };

  const fs::path root = work;
  fs::create_directories(root);
  experiment::RunOptions opt;
  opt.resume = resume;
  opt.jobs = jobs;

  report(1, dsp_exactness);
  report(2, gradient_correctness);
  report(3, lr_oracle);
  report(4, mixing_exactness);

  const fs::path uat_dir = root / "uat_vs_rt";
  if (want(5) || want(7) || want(8)) {
    std::optional<experiment::RunReport> rep;
    double secs = 0.0;
    std::string error;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      rep = experiment::run_ablation(experiment::Suite::UAT_vs_RT, suite_config(uat_dir), opt);
      secs = seconds_since(t0);
    } catch (const std::exception& e) {
      error = e.what();
    }
    report(5, [&]() -> Outcome {
      if (!rep) return {false, "error: " + error};
      return uat_ordering(*rep, secs, jobs);
    });
    report(7, [&]() -> Outcome {
      if (!rep) return {false, "error: " + error};
      return conditional_overfitting(uat_dir, 5);
    });
    report(8, [&]() -> Outcome {
      if (!rep) return {false, "error: " + error};
      return bf_exactness(uat_dir);
    });
  }
  report(6, [&] {
    return decoder_ordering(
        experiment::run_ablation(experiment::Suite::decoder_types, suite_config(root / "decoder_types"), opt));
  });
  report(9, stoi_sanity);
  report(10, [&] { return reproducibility(root, jobs); });

  std::printf("%s: %d criterion(s) failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
