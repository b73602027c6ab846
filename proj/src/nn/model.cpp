// nn/model.cpp

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

#include "daeme/nn/model.hpp"

#include <cmath>

#include "net.hpp"

namespace daeme::nn {

using nlohmann::json;

std::string_view to_string(Arch a) {
  switch (a) {
    case Arch::DDAE: return "DDAE";
    case Arch::HDDAE: return "HDDAE";
    case Arch::BLSTM: return "BLSTM";
    case Arch::FC: return "FC";
    case Arch::CN: return "CN";
  }
  return "?";
}

Arch arch_from_string(std::string_view s) {
  for (Arch a : {Arch::DDAE, Arch::HDDAE, Arch::BLSTM, Arch::FC, Arch::CN})
    if (to_string(a) == s) return a;
  throw ConfigError("unknown architecture '" + std::string(s) + "'");
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Logistic: return "logistic";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Identity: return "identity";
  }
  return "?";
}

Activation activation_from_string(std::string_view s) {
  for (Activation a : {Activation::Logistic, Activation::Tanh, Activation::Relu, Activation::Identity})
    if (to_string(a) == s) return a;
  throw ConfigError("unknown activation '" + std::string(s) + "'");
}

void ModelSpec::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("model spec: ") + what);
  };
  need(in_dim > 0 && out_dim > 0, "input and output dims must be positive");
  switch (arch) {
    case Arch::DDAE:
      need(n_layers >= 0, "n_layers must be non-negative");
      need(n_layers == 0 || width > 0, "width must be positive");
      break;
    case Arch::HDDAE:
      need(n_layers >= 3, "HDDAE needs at least 3 hidden layers");
      need(width > 0, "width must be positive");
      break;
    case Arch::BLSTM:
      need(n_layers >= 1 && cells > 0, "BLSTM needs n_layers >= 1 and cells > 0");
      break;
    case Arch::FC:
      need(width > 0, "width must be positive");
      break;
    case Arch::CN:
      need(conv_layers >= 1 && channels > 0 && width > 0, "CN needs conv layers, channels and width");
      need(kernel >= 1 && kernel % 2 == 1, "kernel size must be odd");
      break;
  }
}

json ModelSpec::to_json() const {
  return {{"arch", std::string(to_string(arch))},
          {"in_dim", in_dim},
          {"out_dim", out_dim},
          {"n_layers", n_layers},
          {"width", width},
          {"cells", cells},
          {"conv_layers", conv_layers},
          {"channels", channels},
          {"kernel", kernel},
          {"hidden", std::string(to_string(hidden))}};
}

ModelSpec ModelSpec::from_json(const json& j) {
  ModelSpec s;
  s.arch = arch_from_string(j.value("arch", std::string("DDAE")));
  s.in_dim = j.value("in_dim", s.in_dim);
  s.out_dim = j.value("out_dim", s.out_dim);
  s.n_layers = j.value("n_layers", s.n_layers);
  s.width = j.value("width", s.width);
  s.cells = j.value("cells", s.cells);
  s.conv_layers = j.value("conv_layers", s.conv_layers);
  s.channels = j.value("channels", s.channels);
  s.kernel = j.value("kernel", s.kernel);
  s.hidden = activation_from_string(j.value("hidden", std::string("tanh")));
  return s;
}

ModelSpec ModelSpec::ddae(int in, int out, int n_layers, int width) {
  ModelSpec s;
  s.arch = Arch::DDAE;
  s.in_dim = in;
  s.out_dim = out;
  s.n_layers = n_layers;
  s.width = width;
  return s;
}

ModelSpec ModelSpec::hddae(int in, int out, int n_layers, int width) {
  ModelSpec s = ddae(in, out, n_layers, width);
  s.arch = Arch::HDDAE;
  return s;
}

ModelSpec ModelSpec::blstm(int in, int out, int n_layers, int cells) {
  ModelSpec s;
  s.arch = Arch::BLSTM;
  s.in_dim = in;
  s.out_dim = out;
  s.n_layers = n_layers;
  s.cells = cells;
  return s;
}

ModelSpec ModelSpec::fc(int in, int out, int width) {
  ModelSpec s;
  s.arch = Arch::FC;
  s.in_dim = in;
  s.out_dim = out;
  s.n_layers = 2;
  s.width = width;
  return s;
}

ModelSpec ModelSpec::cn(int in, int out, int channels, int width) {
  ModelSpec s;
  s.arch = Arch::CN;
  s.in_dim = in;
  s.out_dim = out;
  s.n_layers = 2;
  s.channels = channels;
  s.width = width;
  return s;
}

Matrix activate(const Matrix& z, Activation a) {
  switch (a) {
    case Activation::Logistic: return z.unaryExpr([](double v) { return logistic(v); });
    case Activation::Tanh: return z.array().tanh().matrix();
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Identity: return z;
  }
  return z;
}

Matrix activation_grad_from_output(const Matrix& y, Activation a) {
  switch (a) {
    case Activation::Logistic: return (y.array() * (1.0 - y.array())).matrix();
    case Activation::Tanh: return (1.0 - y.array().square()).matrix();
    case Activation::Relu: return (y.array() > 0.0).cast<double>().matrix();
    case Activation::Identity: return Matrix::Ones(y.rows(), y.cols());
  }
  return y;
}

namespace {

// Dense hidden layers followed by an affine output layer, optionally with
// the highway projection from hidden layer 1 into the last hidden layer.
class DenseStack {
 public:
  void build(std::vector<ParamBlock>& blocks, Eigen::Index& total, const std::string& prefix,
             int in, int out, int hidden_layers, int width, Activation act, bool highway);
  Matrix forward(const Vector& th, const Matrix& x, std::vector<Matrix>* hs) const;
  Matrix backward(const Vector& th, const Matrix& dy, const std::vector<Matrix>& hs, Vector& grad) const;

 private:
  std::vector<ParamBlock> w_, b_;
  ParamBlock out_w_, out_b_, hw_;
  Activation act_ = Activation::Tanh;
  bool highway_ = false;
};

ParamBlock push(std::vector<ParamBlock>& blocks, Eigen::Index& total, std::string name, Eigen::Index rows,
                Eigen::Index cols, bool bias) {
  ParamBlock b{std::move(name), total, rows, cols, bias ? 0.0 : double(cols), bias ? 0.0 : double(rows), bias};
  total += rows * cols;
  blocks.push_back(b);
  return b;
}

void DenseStack::build(std::vector<ParamBlock>& blocks, Eigen::Index& total, const std::string& prefix,
                       int in, int out, int hidden_layers, int width, Activation act, bool highway) {
  act_ = act;
  highway_ = highway;
  int prev = in;
  for (int l = 0; l < hidden_layers; ++l) {
    const std::string n = prefix + "dense" + std::to_string(l + 1);
    w_.push_back(push(blocks, total, n + ".W", width, prev, false));
    b_.push_back(push(blocks, total, n + ".b", 1, width, true));
    prev = width;
  }
  if (highway) hw_ = push(blocks, total, prefix + "highway.P", width, width, false);
  out_w_ = push(blocks, total, prefix + "out.W", out, prev, false);
  out_b_ = push(blocks, total, prefix + "out.b", 1, out, true);
}

Matrix DenseStack::forward(const Vector& th, const Matrix& x, std::vector<Matrix>* hs) const {
  const int H = static_cast<int>(w_.size());
  Matrix h = x;
  Matrix h1;
  if (hs) hs->push_back(x);
  for (int l = 0; l < H; ++l) {
    Matrix z = h * view(th, w_[l]).transpose();
    z.rowwise() += view(th, b_[l]).row(0);
    if (highway_ && l == H - 1) z.noalias() += h1 * view(th, hw_).transpose();
    h = activate(z, act_);
    if (l == 0) h1 = h;
    if (hs) hs->push_back(h);
  }
  Matrix y = h * view(th, out_w_).transpose();
  y.rowwise() += view(th, out_b_).row(0);
  return y;
}

Matrix DenseStack::backward(const Vector& th, const Matrix& dy, const std::vector<Matrix>& hs, Vector& grad) const {
  const int H = static_cast<int>(w_.size());
  view(grad, out_w_).noalias() += dy.transpose() * hs[H];
  view(grad, out_b_).row(0) += dy.colwise().sum();
  Matrix dh = dy * view(th, out_w_);
  Matrix extra;
  for (int l = H - 1; l >= 0; --l) {
    Matrix dz = dh.cwiseProduct(activation_grad_from_output(hs[l + 1], act_));
    view(grad, w_[l]).noalias() += dz.transpose() * hs[l];
    view(grad, b_[l]).row(0) += dz.colwise().sum();
    if (highway_ && l == H - 1) {
      view(grad, hw_).noalias() += dz.transpose() * hs[1];
      extra = dz * view(th, hw_);
    }
    dh = dz * view(th, w_[l]);
    if (highway_ && l == 1) dh += extra;  // dh now refers to hidden layer 1
  }
  return dh;
}

class MlpNet : public Net {
 public:
  explicit MlpNet(const ModelSpec& s) : Net(s) {
    const int H = s.arch == Arch::FC ? 2 : s.n_layers;
    stack_.build(blocks, total, "", s.in_dim, s.out_dim, H, s.width, s.hidden, s.arch == Arch::HDDAE);
  }
  Matrix forward(const Vector& th, const Matrix& x, Cache* cache) const override {
    return stack_.forward(th, x, cache ? &cache->mats : nullptr);
  }
  Matrix backward(const Vector& th, const Matrix&, const Matrix& dy, const Cache& cache,
                  Vector& grad) const override {
    return stack_.backward(th, dy, cache.mats, grad);
  }

 private:
  DenseStack stack_;
};

// Same-padded stride-1 convolution over time via im2col; a T x C input
// becomes T x (K*C) with column k*C + c holding x(t + k - K/2, c).
Matrix im2col(const Matrix& x, int K) {
  const Eigen::Index T = x.rows(), C = x.cols();
  const int pad = K / 2;
  Matrix col = Matrix::Zero(T, K * C);
  for (Eigen::Index t = 0; t < T; ++t)
    for (int k = 0; k < K; ++k) {
      const Eigen::Index s = t + k - pad;
      if (s >= 0 && s < T) col.block(t, k * C, 1, C) = x.row(s);
    }
  return col;
}

Matrix col2im(const Matrix& dcol, int K, Eigen::Index C) {
  const Eigen::Index T = dcol.rows();
  const int pad = K / 2;
  Matrix dx = Matrix::Zero(T, C);
  for (Eigen::Index t = 0; t < T; ++t)
    for (int k = 0; k < K; ++k) {
      const Eigen::Index s = t + k - pad;
      if (s >= 0 && s < T) dx.row(s) += dcol.block(t, k * C, 1, C);
    }
  return dx;
}

class CnNet : public Net {
 public:
  explicit CnNet(const ModelSpec& s) : Net(s) {
    int prev = s.in_dim;
    for (int l = 0; l < s.conv_layers; ++l) {
      const std::string n = "conv" + std::to_string(l + 1);
      // Glorot fans for a 1-D kernel: K*C_in in, K*C_out out.
      conv_w_.push_back(push(blocks, total, n + ".W", s.channels, static_cast<Eigen::Index>(s.kernel) * prev, false));
      blocks.back().fan_out = static_cast<double>(s.kernel) * s.channels;
      conv_b_.push_back(push(blocks, total, n + ".b", 1, s.channels, true));
      prev = s.channels;
    }
    stack_.build(blocks, total, "", prev, s.out_dim, s.n_layers, s.width, s.hidden, false);
  }

  // Cache layout: for each conv layer its im2col matrix and its activation,
  // then the dense stack's activations.
  Matrix forward(const Vector& th, const Matrix& x, Cache* cache) const override {
    Matrix h = x;
    for (std::size_t l = 0; l < conv_w_.size(); ++l) {
      Matrix col = im2col(h, spec.kernel);
      Matrix z = col * view(th, conv_w_[l]).transpose();
      z.rowwise() += view(th, conv_b_[l]).row(0);
      h = activate(z, spec.hidden);
      if (cache) {
        cache->mats.push_back(std::move(col));
        cache->mats.push_back(h);
      }
    }
    if (!cache) return stack_.forward(th, h, nullptr);
    std::vector<Matrix> hs;
    Matrix y = stack_.forward(th, h, &hs);
    for (auto& m : hs) cache->mats.push_back(std::move(m));
    return y;
  }

  Matrix backward(const Vector& th, const Matrix& x, const Matrix& dy, const Cache& cache,
                  Vector& grad) const override {
    const std::size_t L = conv_w_.size();
    std::vector<Matrix> hs(cache.mats.begin() + static_cast<long>(2 * L), cache.mats.end());
    Matrix dh = stack_.backward(th, dy, hs, grad);
    for (std::size_t l = L; l-- > 0;) {
      const Matrix& col = cache.mats[2 * l];
      const Matrix& out = cache.mats[2 * l + 1];
      Matrix dz = dh.cwiseProduct(activation_grad_from_output(out, spec.hidden));
      view(grad, conv_w_[l]).noalias() += dz.transpose() * col;
      view(grad, conv_b_[l]).row(0) += dz.colwise().sum();
      const Eigen::Index c_in = l == 0 ? x.cols() : spec.channels;
      dh = col2im(dz * view(th, conv_w_[l]), spec.kernel, c_in);
    }
    return dh;
  }

 private:
  std::vector<ParamBlock> conv_w_, conv_b_;
  DenseStack stack_;
};

}  // namespace

std::shared_ptr<const Net> make_net(const ModelSpec& spec) {
  spec.validate();
  switch (spec.arch) {
    case Arch::DDAE:
    case Arch::HDDAE:
    case Arch::FC: return std::make_shared<MlpNet>(spec);
    case Arch::CN: return std::make_shared<CnNet>(spec);
    case Arch::BLSTM: return make_blstm_net(spec);
  }
  throw ConfigError("unsupported architecture");
}

Model::Model(const ModelSpec& spec, std::uint64_t seed) : spec_(spec), seed_(seed), net_(make_net(spec)) {
  theta_ = Vector::Zero(net_->total);
  Rng rng(derive_seed(seed, "init"));
  for (const auto& b : net_->blocks) {
    if (b.bias) continue;
    const double limit = std::sqrt(6.0 / (b.fan_in + b.fan_out));
    for (Eigen::Index i = 0; i < b.size(); ++i) theta_[b.offset + i] = rng.uniform(-limit, limit);
  }
}

const std::vector<ParamBlock>& Model::blocks() const {
  if (!net_) throw Error("model is empty");
  return net_->blocks;
}

const ParamBlock& Model::block(const std::string& name) const {
  for (const auto& b : blocks())
    if (b.name == name) return b;
  throw Error("model has no parameter block '" + name + "'");
}

namespace {

void check_input(const ModelSpec& spec, const Matrix& x) {
  if (x.cols() != spec.in_dim)
    throw Error("model input has " + std::to_string(x.cols()) + " dims, expected " + std::to_string(spec.in_dim));
  if (x.rows() == 0) throw Error("model input has no frames");
  if (!x.allFinite()) throw Error("model input contains non-finite values");
}

}  // namespace

Matrix Model::forward(const Matrix& x) const {
  if (!net_) throw Error("model is empty");
  check_input(spec_, x);
  Matrix y = net_->forward(theta_, x, nullptr);
  if (!y.allFinite()) throw Error("non-finite value in " + std::string(to_string(spec_.arch)) + " forward pass");
  return y;
}

double Model::accumulate_gradient(const Matrix& x, const Matrix& target, double scale, Vector& grad) const {
  if (!net_) throw Error("model is empty");
  check_input(spec_, x);
  if (target.rows() != x.rows() || target.cols() != spec_.out_dim)
    throw Error("training target shape does not match model output");
  if (grad.size() != theta_.size()) throw Error("gradient buffer has the wrong size");
  Cache cache;
  Matrix y = net_->forward(theta_, x, &cache);
  Matrix diff = y - target;
  const double sse = diff.squaredNorm();
  if (!std::isfinite(sse)) return sse;
  net_->backward(theta_, x, (2.0 * scale) * diff, cache, grad);
  return sse;
}

}  // namespace daeme::nn
