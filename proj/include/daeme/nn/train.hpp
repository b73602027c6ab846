// daeme/nn/train.hpp

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

#ifndef DAEME_NN_TRAIN_HPP_
#define DAEME_NN_TRAIN_HPP_

#include <vector>

#include "json.hpp"

#include "daeme/nn/model.hpp"

namespace daeme::nn {

struct TrainConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int epochs = 20;
  /// Frames per step. Sequence models take whole utterances until a step
  /// holds at least this many frames.
  int batch_size = 64;
  std::uint64_t seed = 1;
  /// Global gradient-norm clip; negative selects the default (5 for
  /// recurrent models, none otherwise), 0 disables clipping.
  double clip_norm = -1.0;

  void validate() const;
  double effective_clip(const ModelSpec& spec) const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct TrainResult {
  /// Mean squared error over the whole training set after each epoch.
  std::vector<double> loss_curve;
};

/// Adam on the mean squared error. `inputs[i]` and `targets[i]` are one
/// utterance each (T_i x in_dim, T_i x out_dim). Frame-wise models pool and
/// shuffle frames; sequence models shuffle utterances. Deterministic in
/// (model parameters, data, cfg).
TrainResult train(Model& model, const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets,
                  const TrainConfig& cfg);

/// Mean squared error of the model over a data set (all elements weighted equally).
double evaluate_mse(const Model& model, const std::vector<Matrix>& inputs, const std::vector<Matrix>& targets);

struct GradCheckResult {
  double max_rel_error = 0.0;
  int coordinates = 0;
};

/// Compares analytic gradients of the MSE with central differences on
/// `n_coords` randomly chosen parameters.
GradCheckResult grad_check(const Model& model, const Matrix& x, const Matrix& target, double eps = 1e-5,
                           int n_coords = 200, std::uint64_t seed = 7);

}  // namespace daeme::nn

#endif  // DAEME_NN_TRAIN_HPP_
