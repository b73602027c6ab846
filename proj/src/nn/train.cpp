// nn/train.cpp

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

#include "daeme/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace daeme::nn {

using nlohmann::json;

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train: lr must be positive");
  if (epochs < 1) throw ConfigError("train: epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("train: batch_size must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("train: Adam betas in [0, 1)");
  if (!(adam_eps > 0.0)) throw ConfigError("train: Adam epsilon must be positive");
}

double TrainConfig::effective_clip(const ModelSpec& spec) const {
  if (clip_norm >= 0.0) return clip_norm;
  return spec.arch == Arch::BLSTM ? 5.0 : 0.0;
}

json TrainConfig::to_json() const {
  return {{"lr", lr},         {"beta1", beta1},           {"beta2", beta2}, {"adam_eps", adam_eps},
          {"epochs", epochs}, {"batch_size", batch_size}, {"seed", seed},   {"clip_norm", clip_norm}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig c;
  c.lr = j.value("lr", c.lr);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.adam_eps = j.value("adam_eps", c.adam_eps);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed = j.value("seed", c.seed);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
  return c;
}

namespace {

void check_data(const Model& model, const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets) {
  if (inputs.empty()) throw Error("train: empty dataset");
  if (inputs.size() != targets.size()) throw Error("train: input and target counts differ");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].rows() == 0) throw Error("train: utterance " + std::to_string(i) + " has no frames");
    if (inputs[i].cols() != model.spec().in_dim || targets[i].cols() != model.spec().out_dim ||
        inputs[i].rows() != targets[i].rows())
      throw Error("train: utterance " + std::to_string(i) + " has inconsistent shapes");
  }
}

Matrix stack_rows(const std::vector<Matrix>& parts) {
  Eigen::Index rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Matrix out(rows, parts.front().cols());
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    out.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return out;
}

}  // namespace

double evaluate_mse(const Model& model, const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets) {
  check_data(model, inputs, targets);
  double sse = 0.0;
  double count = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    sse += (model.forward(inputs[i]) - targets[i]).squaredNorm();
    count += static_cast<double>(targets[i].size());
  }
  return sse / count;
}

TrainResult train(Model& model, const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets,
                  const TrainConfig& cfg) {
  cfg.validate();
  check_data(model, inputs, targets);
  const bool frames = !model.spec().sequential();
  const double clip = cfg.effective_clip(model.spec());

  Matrix X, Y;
  std::size_t n_items = inputs.size();
  if (frames) {
    X = stack_rows(inputs);
    Y = stack_rows(targets);
    n_items = static_cast<std::size_t>(X.rows());
  }

  Vector& theta = model.parameters();
  const Eigen::Index P = theta.size();
  Vector m = Vector::Zero(P), v = Vector::Zero(P), grad(P);
  std::vector<std::size_t> order(n_items);
  long step = 0;
  TrainResult result;
  const std::size_t B = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(cfg.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
    shuffle(std::span<std::size_t>(order), rng);

    for (std::size_t start = 0, end = 0; start < n_items; start = end) {
      if (frames) {
        end = std::min(n_items, start + B);
      } else {
        // Whole utterances until the step holds at least B frames.
        std::size_t held = 0;
        for (end = start; end < n_items && held < B; ++end)
          held += static_cast<std::size_t>(inputs[order[end]].rows());
      }
      grad.setZero();
      double sse = 0.0;
      if (frames) {
        const Eigen::Index rows = static_cast<Eigen::Index>(end - start);
        Matrix xb(rows, X.cols()), yb(rows, Y.cols());
        for (Eigen::Index r = 0; r < rows; ++r) {
          xb.row(r) = X.row(static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(r)]));
          yb.row(r) = Y.row(static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(r)]));
        }
        sse = model.accumulate_gradient(xb, yb, 1.0 / static_cast<double>(yb.size()), grad);
      } else {
        double count = 0.0;
        for (std::size_t k = start; k < end; ++k) count += static_cast<double>(targets[order[k]].size());
        for (std::size_t k = start; k < end; ++k) {
          sse += model.accumulate_gradient(inputs[order[k]], targets[order[k]], 1.0 / count, grad);
          if (!std::isfinite(sse)) break;
        }
      }
      if (!std::isfinite(sse) || !grad.allFinite())
        throw Error("training diverged: non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch starting at " +
                    std::to_string(start) + " (" + std::string(to_string(model.spec().arch)) + ")");
      if (clip > 0.0) {
        const double norm = grad.norm();
        if (norm > clip) grad *= clip / norm;
      }
      ++step;
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      theta.array() -= cfg.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.adam_eps);
    }

    double loss = 0.0;
    if (frames) {
      loss = (model.forward(X) - Y).squaredNorm() / static_cast<double>(Y.size());
    } else {
      loss = evaluate_mse(model, inputs, targets);
    }
    if (!std::isfinite(loss)) throw Error("training diverged: non-finite loss after epoch " + std::to_string(epoch + 1));
    result.loss_curve.push_back(loss);
  }
  return result;
}

GradCheckResult grad_check(const Model& model, const Matrix& x, const Matrix& target, double eps, int n_coords,
                           std::uint64_t seed) {
  const Eigen::Index P = model.num_parameters();
  Vector grad = Vector::Zero(P);
  const double scale = 1.0 / static_cast<double>(target.size());
  model.accumulate_gradient(x, target, scale, grad);

  Model probe = model;
  auto loss = [&]() { return (probe.forward(x) - target).squaredNorm() * scale; };

  std::vector<Eigen::Index> coords(static_cast<std::size_t>(P));
  std::iota(coords.begin(), coords.end(), Eigen::Index{0});
  Rng rng(seed);
  shuffle(std::span<Eigen::Index>(coords), rng);
  coords.resize(std::min<std::size_t>(coords.size(), static_cast<std::size_t>(n_coords)));

  GradCheckResult r;
  for (Eigen::Index k : coords) {
    const double orig = probe.parameters()[k];
    probe.parameters()[k] = orig + eps;
    const double up = loss();
    probe.parameters()[k] = orig - eps;
    const double down = loss();
    probe.parameters()[k] = orig;
    const double numeric = (up - down) / (2.0 * eps);
    const double analytic = grad[k];
    const double denom = std::max({std::abs(numeric) + std::abs(analytic), 1e-8});
    r.max_rel_error = std::max(r.max_rel_error, std::abs(numeric - analytic) / denom);
    ++r.coordinates;
  }
  return r;
}

}  // namespace daeme::nn
