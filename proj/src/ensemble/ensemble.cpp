// ensemble/ensemble.cpp

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

#include "daeme/ensemble/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include "daeme/dsp/wavelet.hpp"
#include "daeme/nn/checkpoint.hpp"

namespace daeme::ensemble {

using nlohmann::json;
using corpus::AttributeTag;
using corpus::Waveform;

dsp::StftConfig FeatureConfig::wd_stft() const {
  dsp::StftConfig c;
  c.fft_size = wd_fft_size;
  c.hop = wd_hop;
  c.sample_rate = stft.sample_rate / 2;
  c.floor = stft.floor;
  return c;
}

int FeatureConfig::band_width(SatMode mode, Band band) const {
  switch (mode) {
    case SatMode::None: return stft.bins();
    case SatMode::SS: return band == Band::Low ? ss.low_width() : ss.high_width();
    case SatMode::WD: return wd_fft_size / 2 + 1;
  }
  return 0;
}

void FeatureConfig::validate() const {
  if (stft.fft_size != 512 || stft.hop != 256 || stft.sample_rate != 16000)
    throw ConfigError("features: the front end is fixed at 512-point FFT, hop 256, 16 kHz");
  ss.validate();
  if (ss.total() != stft.bins()) throw ConfigError("features: SS spans must cover all 257 bins");
  if (wd_fft_size < 16 || wd_hop < 1 || wd_hop > wd_fft_size) throw ConfigError("features: invalid WD STFT");
  if (context < 0 || context > 8) throw ConfigError("features: context must lie in [0, 8]");
}

json FeatureConfig::to_json() const {
  return {{"fft_size", stft.fft_size},
          {"hop", stft.hop},
          {"sample_rate", stft.sample_rate},
          {"floor", stft.floor},
          {"ss", {ss.low_first, ss.low_last, ss.high_first, ss.high_last}},
          {"wd_fft_size", wd_fft_size},
          {"wd_hop", wd_hop},
          {"context", context}};
}

FeatureConfig FeatureConfig::from_json(const json& j) {
  FeatureConfig f;
  f.stft.fft_size = j.value("fft_size", f.stft.fft_size);
  f.stft.hop = j.value("hop", f.stft.hop);
  f.stft.sample_rate = j.value("sample_rate", f.stft.sample_rate);
  f.stft.floor = j.value("floor", f.stft.floor);
  if (j.contains("ss")) {
    auto v = j.at("ss").get<std::vector<int>>();
    if (v.size() != 4) throw ConfigError("features: ss must list four bin indices");
    f.ss = {v[0], v[1], v[2], v[3]};
  }
  f.wd_fft_size = j.value("wd_fft_size", f.wd_fft_size);
  f.wd_hop = j.value("wd_hop", f.wd_hop);
  f.context = j.value("context", f.context);
  f.validate();
  return f;
}

Analysis analyze(const Waveform& wave, const FeatureConfig& fc, bool with_wd) {
  Analysis a;
  a.wave = wave;
  std::tie(a.lps, a.phase) = dsp::stft_analyze(wave, fc.stft);
  if (with_wd) {
    const dsp::WaveletBands b = dsp::wavelet_split(wave);
    const int rate = wave.sample_rate / 2;
    std::tie(a.wd_low, a.wd_low_phase) = dsp::stft_analyze(Waveform{b.approx, rate}, fc.wd_stft());
    std::tie(a.wd_high, a.wd_high_phase) = dsp::stft_analyze(Waveform{b.detail, rate}, fc.wd_stft());
    a.has_wd = true;
  }
  return a;
}

Matrix band_features(const Analysis& a, SatMode mode, Band band, const FeatureConfig& fc) {
  switch (mode) {
    case SatMode::None: return a.lps.frames;
    case SatMode::SS: {
      auto [lo, hi] = dsp::spectral_split(a.lps.frames, fc.ss);
      return band == Band::Low ? lo : hi;
    }
    case SatMode::WD:
      if (!a.has_wd) throw Error("band_features: analysis has no wavelet bands");
      return band == Band::Low ? a.wd_low.frames : a.wd_high.frames;
  }
  return {};
}

Matrix merge_node_output(const Analysis& noisy, SatMode mode, const Matrix& low, const Matrix& high,
                         const FeatureConfig& fc) {
  switch (mode) {
    case SatMode::None: return low;
    case SatMode::SS: return dsp::spectral_merge(low, high, fc.ss);
    case SatMode::WD: {
      if (!noisy.has_wd) throw Error("merge_node_output: analysis has no wavelet bands");
      dsp::LpsFeatures lo = noisy.wd_low, hi = noisy.wd_high;
      if (low.rows() != lo.frames.rows() || low.cols() != lo.frames.cols() || high.rows() != hi.frames.rows() ||
          high.cols() != hi.frames.cols())
        throw Error("merge_node_output: WD band outputs do not match the band spectra");
      lo.frames = low;
      hi.frames = high;
      dsp::WaveletBands b;
      b.approx = dsp::stft_synthesize(lo, noisy.wd_low_phase).samples;
      b.detail = dsp::stft_synthesize(hi, noisy.wd_high_phase).samples;
      b.signal_length = noisy.wave.size();
      b.sample_rate = noisy.wave.sample_rate;
      return dsp::stft_analyze(dsp::wavelet_merge(b), fc.stft).first.frames;
    }
  }
  return {};
}

Matrix stack_context(const Matrix& x, int context) {
  if (context == 0) return x;
  const Eigen::Index T = x.rows(), d = x.cols();
  Matrix out(T, d * (2 * context + 1));
  for (Eigen::Index t = 0; t < T; ++t)
    for (int k = -context; k <= context; ++k) {
      const Eigen::Index s = std::clamp<Eigen::Index>(t + k, 0, T - 1);
      out.block(t, (k + context) * d, 1, d) = x.row(s);
    }
  return out;
}

Normalizer Normalizer::fit(const std::vector<Matrix>& data) {
  if (data.empty()) throw Error("Normalizer::fit: no data");
  const Eigen::Index d = data.front().cols();
  RowVector sum = RowVector::Zero(d), sq = RowVector::Zero(d);
  double n = 0.0;
  for (const auto& m : data) {
    if (m.cols() != d) throw Error("Normalizer::fit: inconsistent widths");
    sum += m.colwise().sum();
    n += static_cast<double>(m.rows());
  }
  if (n == 0.0) throw Error("Normalizer::fit: no frames");
  Normalizer z;
  z.mean = sum / n;
  for (const auto& m : data) sq += (m.rowwise() - z.mean).array().square().matrix().colwise().sum();
  z.scale = (sq / n).cwiseSqrt().cwiseMax(1e-3);
  return z;
}

Normalizer Normalizer::identity(Eigen::Index dims) { return {RowVector::Zero(dims), RowVector::Ones(dims)}; }

Matrix Normalizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw Error("normalizer width mismatch");
  return ((x.rowwise() - mean).array().rowwise() / scale.array()).matrix();
}

Matrix Normalizer::invert(const Matrix& z) const {
  if (z.cols() != mean.size()) throw Error("normalizer width mismatch");
  return ((z.array().rowwise() * scale.array()).rowwise() + mean.array()).matrix();
}

Matrix ComponentModel::apply(const Matrix& band_input, int context) const {
  return out_norm.invert(model.forward(stack_context(in_norm.apply(band_input), context)));
}

std::vector<PreparedPair> prepare_pairs(const dsdt::PairList& pairs, const FeatureConfig& fc, bool with_wd, int jobs) {
  std::vector<PreparedPair> out(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    pairs[i]->validate();
    out[i].id = pairs[i]->id;
    out[i].tag = pairs[i]->tag;
    out[i].noisy = analyze(pairs[i]->noisy, fc, with_wd);
    out[i].clean = analyze(pairs[i]->clean, fc, with_wd);
  });
  return out;
}

std::string_view to_string(WarmStart w) {
  switch (w) {
    case WarmStart::Auto: return "auto";
    case WarmStart::On: return "on";
    case WarmStart::Off: return "off";
  }
  return "?";
}

WarmStart warm_start_from_string(std::string_view s) {
  if (s == "auto") return WarmStart::Auto;
  if (s == "on") return WarmStart::On;
  if (s == "off") return WarmStart::Off;
  throw ConfigError("unknown warm_start value '" + std::string(s) + "'");
}

namespace {

std::uint64_t branch_key(int node, Band band) { return static_cast<std::uint64_t>(node) * 4 + static_cast<int>(band); }

std::string digest_members(const std::vector<std::string>& members) {
  std::vector<std::string> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::string s;
  for (const auto& m : sorted) s += m + '\n';
  return sha256_hex(s);
}

std::vector<Band> bands_of(SatMode mode) {
  if (mode == SatMode::None) return {Band::Full};
  return {Band::Low, Band::High};
}

}  // namespace

MultiBranchEncoder train_components(const dsdt::Dsdt& tree, const dsdt::PartitionPlan& plan,
                                    const std::vector<PreparedPair>& train, const FeatureConfig& fc,
                                    const ComponentOptions& opt) {
  fc.validate();
  tree.validate();
  if (plan.node_ids.empty()) throw Error("train_components: plan selects no nodes");
  if (train.empty()) throw Error("train_components: empty training set");
  std::map<std::string, const PreparedPair*> by_id;
  for (const auto& p : train) by_id[p.id] = &p;
  if (plan.sat_mode == SatMode::WD)
    for (const auto& p : train)
      if (!p.noisy.has_wd || !p.clean.has_wd) throw Error("train_components: WD plan needs wavelet analyses");

  const bool warm = opt.warm_start == WarmStart::On || (opt.warm_start == WarmStart::Auto && tree.kind == dsdt::TreeKind::UAT);
  std::set<int> needed(plan.node_ids.begin(), plan.node_ids.end());
  for (int id : plan.node_ids)
    if (warm && tree.node(id).depth >= 2) needed.insert(tree.node(id).parent);
  for (int id : needed) {
    const auto& n = tree.node(id);
    if (n.members.empty()) throw Error("train_components: node " + n.name + " has an empty training subset; rejecting plan");
    for (const auto& m : n.members)
      if (!by_id.count(m)) throw Error("train_components: node " + n.name + " references unknown utterance " + m);
  }

  // Normalizers are shared by every branch of a band and fitted on the whole
  // training set, so a warm-started child sees the same feature scaling.
  std::map<Band, std::pair<Normalizer, Normalizer>> norms;
  for (Band b : bands_of(plan.sat_mode)) {
    std::vector<Matrix> in, out;
    for (const auto& p : train) {
      in.push_back(band_features(p.noisy, plan.sat_mode, b, fc));
      out.push_back(band_features(p.clean, plan.sat_mode, b, fc));
    }
    norms[b] = {Normalizer::fit(in), Normalizer::fit(out)};
  }

  std::map<std::uint64_t, ComponentModel> trained;
  int max_depth = 0;
  for (int id : needed) max_depth = std::max(max_depth, tree.node(id).depth);
  for (int depth = 0; depth <= max_depth; ++depth) {
    std::vector<std::pair<int, Band>> tasks;
    for (int id : needed)
      if (tree.node(id).depth == depth)
        for (Band b : bands_of(plan.sat_mode)) tasks.emplace_back(id, b);
    std::vector<ComponentModel> results(tasks.size());
    parallel_for(tasks.size(), opt.jobs, [&](std::size_t t) {
      const auto [id, band] = tasks[t];
      const auto& node = tree.node(id);
      const int width = fc.band_width(plan.sat_mode, band);
      nn::ModelSpec spec = opt.spec;
      spec.in_dim = width * (2 * fc.context + 1);
      spec.out_dim = width;

      ComponentModel c;
      c.branch = {id, band};
      c.members = node.members;
      c.subset_digest = digest_members(node.members);
      std::tie(c.in_norm, c.out_norm) = norms.at(band);
      const std::uint64_t key = branch_key(id, band);
      if (warm && depth >= 2) {
        c.model = trained.at(branch_key(node.parent, band)).model;
        c.warm_started = true;
      } else {
        c.model = nn::Model(spec, derive_seed(opt.seed, "component-init", key));
      }
      c.init_digest = nn::model_digest(c.model);

      std::vector<Matrix> xs, ys;
      for (const auto& m : node.members) {
        const PreparedPair& p = *by_id.at(m);
        xs.push_back(stack_context(c.in_norm.apply(band_features(p.noisy, plan.sat_mode, band, fc)), fc.context));
        ys.push_back(c.out_norm.apply(band_features(p.clean, plan.sat_mode, band, fc)));
      }
      nn::TrainConfig tc = opt.train;
      tc.seed = derive_seed(opt.seed, "component-train", key);
      try {
        c.loss_curve = nn::train(c.model, xs, ys, tc).loss_curve;
      } catch (const Error& e) {
        throw Error("component " + node.name + "/" + std::string(to_string(band)) + ": " + e.what());
      }
      results[t] = std::move(c);
    });
    for (std::size_t t = 0; t < tasks.size(); ++t)
      trained.emplace(branch_key(tasks[t].first, tasks[t].second), std::move(results[t]));
  }

  MultiBranchEncoder enc;
  enc.tree = tree;
  enc.plan = plan;
  enc.features = fc;
  for (const auto& br : plan.branches()) enc.components.push_back(trained.at(branch_key(br.node, br.band)));
  const std::set<int> in_plan(plan.node_ids.begin(), plan.node_ids.end());
  for (auto& [key, comp] : trained)
    if (!in_plan.count(comp.branch.node)) enc.auxiliary.push_back(comp);
  return enc;
}

std::vector<Matrix> encode(const MultiBranchEncoder& enc, const Analysis& noisy) {
  if (noisy.lps.dims() != enc.features.stft.bins()) throw Error("encode: feature width does not match the encoder");
  std::vector<Matrix> z;
  for (const auto& c : enc.components)
    z.push_back(c.apply(band_features(noisy, enc.plan.sat_mode, c.branch.band, enc.features), enc.features.context));
  return z;
}

std::vector<Matrix> node_outputs(const MultiBranchEncoder& enc, const Analysis& noisy, const std::vector<Matrix>& z) {
  const std::size_t k = static_cast<std::size_t>(enc.plan.k());
  if (z.size() != enc.plan.node_ids.size() * k) throw Error("node_outputs: branch count mismatch");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < enc.plan.node_ids.size(); ++j) {
    if (k == 1)
      out.push_back(z[j]);
    else
      out.push_back(merge_node_output(noisy, enc.plan.sat_mode, z[2 * j], z[2 * j + 1], enc.features));
  }
  return out;
}

Matrix concat_columns(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw Error("concat_columns: nothing to concatenate");
  Eigen::Index cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != blocks.front().rows()) throw Error("concat_columns: frame counts differ");
    cols += b.cols();
  }
  Matrix out(blocks.front().rows(), cols);
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

double component_mse(const MultiBranchEncoder& enc, const ComponentModel& comp,
                     const std::vector<const PreparedPair*>& pairs) {
  if (pairs.empty()) throw Error("component_mse: no pairs");
  double sse = 0.0, n = 0.0;
  for (const auto* p : pairs) {
    const Matrix target = band_features(p->clean, enc.plan.sat_mode, comp.branch.band, enc.features);
    const Matrix y = comp.apply(band_features(p->noisy, enc.plan.sat_mode, comp.branch.band, enc.features),
                                enc.features.context);
    sse += (y - target).squaredNorm();
    n += static_cast<double>(target.size());
  }
  return sse / n;
}

std::string_view to_string(DecoderKind k) {
  switch (k) {
    case DecoderKind::BF: return "BF";
    case DecoderKind::LR: return "LR";
    case DecoderKind::FC: return "FC";
    case DecoderKind::CN: return "CN";
  }
  return "?";
}

DecoderKind decoder_kind_from_string(std::string_view s) {
  for (DecoderKind k : {DecoderKind::BF, DecoderKind::LR, DecoderKind::FC, DecoderKind::CN})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown decoder '" + std::string(s) + "'");
}

json DecoderOptions::to_json() const {
  return {{"kind", std::string(to_string(kind))}, {"lambda", lambda}, {"width", width},
          {"channels", channels},                 {"train", train.to_json()}, {"seed", seed}};
}

DecoderOptions DecoderOptions::from_json(const json& j) {
  DecoderOptions o;
  o.kind = decoder_kind_from_string(j.value("kind", std::string("LR")));
  o.lambda = j.value("lambda", o.lambda);
  o.width = j.value("width", o.width);
  o.channels = j.value("channels", o.channels);
  if (j.contains("train")) o.train = nn::TrainConfig::from_json(j.at("train"));
  o.seed = j.value("seed", o.seed);
  if (!(o.lambda >= 0.0)) throw ConfigError("decoder: lambda must be non-negative");
  return o;
}

Decoder fit_lr_decoder(const Matrix& z, const Matrix& x, double lambda) {
  if (z.rows() != x.rows()) throw Error("fit_lr_decoder: frame counts differ");
  if (z.rows() == 0) throw Error("fit_lr_decoder: no frames");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error("fit_lr_decoder: lambda must be finite and >= 0");
  const Eigen::Index n = z.rows(), p = z.cols() + 1;
  Decoder d;
  d.kind = DecoderKind::LR;
  d.lambda = lambda;
  d.in_dim = z.cols();
  if (lambda == 0.0) {
    Matrix y(n, p);
    y << z, Matrix::Ones(n, 1);
    Eigen::ColPivHouseholderQR<Matrix> qr(y);
    if (qr.rank() < p) throw Error("fit_lr_decoder: rank deficient; increase lambda");
    d.W = qr.solve(x);
  } else {
    Matrix a = Matrix::Zero(n + p, p);
    a.topLeftCorner(n, p - 1) = z;
    a.block(0, p - 1, n, 1).setOnes();
    a.bottomRows(p).diagonal().setConstant(std::sqrt(lambda));
    Matrix b = Matrix::Zero(n + p, x.cols());
    b.topRows(n) = x;
    d.W = Eigen::HouseholderQR<Matrix>(a).solve(b);
  }
  if (!d.W.allFinite()) throw Error("fit_lr_decoder: non-finite solution");
  return d;
}

Decoder train_nn_decoder(const std::vector<Matrix>& z, const std::vector<Matrix>& x, const DecoderOptions& opt) {
  if (opt.kind != DecoderKind::FC && opt.kind != DecoderKind::CN)
    throw Error("train_nn_decoder: kind must be FC or CN");
  if (z.empty() || z.size() != x.size()) throw Error("train_nn_decoder: inconsistent training data");
  Decoder d;
  d.kind = opt.kind;
  d.in_dim = z.front().cols();
  d.in_norm = Normalizer::fit(z);
  d.out_norm = Normalizer::fit(x);
  const int in = static_cast<int>(d.in_dim), out = static_cast<int>(x.front().cols());
  const nn::ModelSpec spec =
      opt.kind == DecoderKind::FC ? nn::ModelSpec::fc(in, out, opt.width) : nn::ModelSpec::cn(in, out, opt.channels, opt.width);
  nn::Model m(spec, derive_seed(opt.seed, "decoder-init"));
  std::vector<Matrix> zs, xs;
  for (std::size_t i = 0; i < z.size(); ++i) {
    zs.push_back(d.in_norm.apply(z[i]));
    xs.push_back(d.out_norm.apply(x[i]));
  }
  nn::TrainConfig tc = opt.train;
  tc.seed = derive_seed(opt.seed, "decoder-train");
  nn::train(m, zs, xs, tc);
  d.net = std::move(m);
  return d;
}

Decoder train_decoder(const MultiBranchEncoder& enc, const std::vector<PreparedPair>& train,
                      const DecoderOptions& opt, int jobs) {
  if (opt.kind == DecoderKind::BF) {
    Decoder d;
    d.kind = DecoderKind::BF;
    d.in_dim = static_cast<Eigen::Index>(enc.plan.node_ids.size()) * enc.features.stft.bins();
    return d;
  }
  std::vector<Matrix> z(train.size()), x(train.size());
  parallel_for(train.size(), jobs, [&](std::size_t i) {
    z[i] = concat_columns(node_outputs(enc, train[i].noisy, encode(enc, train[i].noisy)));
    x[i] = train[i].clean.lps.frames;
  });
  if (opt.kind == DecoderKind::LR) {
    Eigen::Index rows = 0;
    for (const auto& m : z) rows += m.rows();
    Matrix zs(rows, z.front().cols()), xs(rows, x.front().cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      zs.middleRows(r, z[i].rows()) = z[i];
      xs.middleRows(r, x[i].rows()) = x[i];
      r += z[i].rows();
    }
    return fit_lr_decoder(zs, xs, opt.lambda);
  }
  return train_nn_decoder(z, x, opt);
}

Matrix decode(const Decoder& dec, const Matrix& zcat) {
  if (zcat.cols() != dec.in_dim)
    throw Error("decode: input has " + std::to_string(zcat.cols()) + " dims, decoder expects " + std::to_string(dec.in_dim));
  switch (dec.kind) {
    case DecoderKind::LR: return zcat * dec.W.topRows(dec.in_dim) + Matrix::Ones(zcat.rows(), 1) * dec.W.bottomRows(1);
    case DecoderKind::FC:
    case DecoderKind::CN:
      if (!dec.net) throw Error("decode: decoder network missing");
      return dec.out_norm.invert(dec.net->forward(dec.in_norm.apply(zcat)));
    case DecoderKind::BF: throw Error("decode: BF decoding needs an oracle tag (use decode_bf)");
  }
  return {};
}

std::size_t bf_node(const MultiBranchEncoder& enc, const AttributeTag& tag) {
  std::size_t best = enc.plan.node_ids.size();
  int best_depth = -1;
  for (std::size_t j = 0; j < enc.plan.node_ids.size(); ++j) {
    const int id = enc.plan.node_ids[j];
    if (enc.tree.path_matches(id, tag) && enc.tree.node(id).depth > best_depth) {
      best = j;
      best_depth = enc.tree.node(id).depth;
    }
  }
  if (best == enc.plan.node_ids.size()) throw Error("decode_bf: no branch matches the oracle tag");
  return best;
}

Matrix decode_bf(const MultiBranchEncoder& enc, const std::vector<Matrix>& node_outs, const AttributeTag& tag) {
  if (node_outs.size() != enc.plan.node_ids.size()) throw Error("decode_bf: node output count mismatch");
  return node_outs[bf_node(enc, tag)];
}

Matrix enhance_features(const DaemeSystem& sys, const Analysis& noisy, const AttributeTag* tag) {
  const auto outs = node_outputs(sys.encoder, noisy, encode(sys.encoder, noisy));
  Matrix y;
  if (sys.decoder.kind == DecoderKind::BF) {
    if (!tag) throw Error("enhance: the BF decoder is oracle-only and needs the utterance's attribute tag");
    y = decode_bf(sys.encoder, outs, *tag);
  } else {
    y = decode(sys.decoder, concat_columns(outs));
  }
  const double floor_log = std::log(sys.encoder.features.stft.floor);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (noisy.lps.frames.data()[i] <= floor_log + 1e-9)
      y.data()[i] = floor_log;
    else
      y.data()[i] = std::clamp(y.data()[i], floor_log, 50.0);  // keeps exp() finite in resynthesis
  }
  return y;
}

Waveform enhance_utterance(const DaemeSystem& sys, const Waveform& noisy, const AttributeTag* tag) {
  noisy.validate();
  noisy.require_rate(sys.encoder.features.stft.sample_rate);
  const Analysis a = analyze(noisy, sys.encoder.features, sys.encoder.plan.sat_mode == SatMode::WD);
  dsp::LpsFeatures lps = a.lps;
  lps.frames = enhance_features(sys, a, tag);
  return dsp::stft_synthesize(lps, a.phase);
}

std::vector<std::string> encoder_digests(const MultiBranchEncoder& enc) {
  std::vector<std::string> d;
  for (const auto& c : enc.components) d.push_back(nn::model_digest(c.model));
  return d;
}

}  // namespace daeme::ensemble
