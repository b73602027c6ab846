// daeme/nn/model.hpp

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

#ifndef DAEME_NN_MODEL_HPP_
#define DAEME_NN_MODEL_HPP_

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "daeme/common.hpp"

namespace daeme::nn {

enum class Arch { DDAE, HDDAE, BLSTM, FC, CN };
enum class Activation { Logistic, Tanh, Relu, Identity };

std::string_view to_string(Arch a);
Arch arch_from_string(std::string_view s);
std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

/// Architecture description. Fields not used by an architecture are ignored.
///   DDAE   n_layers hidden dense layers of `width`, affine output
///   HDDAE  as DDAE plus a learned projection from hidden layer 1 into the
///          pre-activation of the last hidden layer (n_layers >= 3)
///   BLSTM  n_layers bidirectional layers of `cells`, affine projection
///   FC     two hidden dense layers of `width`, affine output
///   CN     conv_layers 1-D convolutions (`channels`, `kernel`, same
///          padding) then two hidden dense layers of `width`, affine output
struct ModelSpec {
  Arch arch = Arch::DDAE;
  int in_dim = 257;
  int out_dim = 257;
  int n_layers = 3;
  int width = 128;
  int cells = 32;
  int conv_layers = 3;
  int channels = 16;
  int kernel = 11;
  Activation hidden = Activation::Tanh;

  /// Sequence models see whole utterances; frame-wise models see frames.
  bool sequential() const { return arch == Arch::BLSTM || arch == Arch::CN; }
  void validate() const;
  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);

  static ModelSpec ddae(int in, int out, int n_layers = 3, int width = 128);
  static ModelSpec hddae(int in, int out, int n_layers = 3, int width = 128);
  static ModelSpec blstm(int in, int out, int n_layers = 2, int cells = 32);
  static ModelSpec fc(int in, int out, int width = 128);
  static ModelSpec cn(int in, int out, int channels = 16, int width = 128);
};

/// A named rectangular slice of the flat parameter vector (row-major).
struct ParamBlock {
  std::string name;
  Eigen::Index offset = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  double fan_in = 0.0;
  double fan_out = 0.0;
  bool bias = false;

  Eigen::Index size() const { return rows * cols; }
};

/// Scratch storage a network fills during forward and reads in backward.
struct Cache {
  std::vector<Matrix> mats;
};

class Net;

/// A network plus its flat parameter vector. Copies share the (immutable)
/// layout and own their parameters.
class Model {
 public:
  Model() = default;
  /// Builds the layout and draws Glorot-uniform weights, zero biases.
  Model(const ModelSpec& spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  Vector& parameters() { return theta_; }
  const Vector& parameters() const { return theta_; }
  Eigen::Index num_parameters() const { return theta_.size(); }
  const std::vector<ParamBlock>& blocks() const;
  const ParamBlock& block(const std::string& name) const;

  /// T x in_dim -> T x out_dim. Throws on dimension mismatch or non-finite
  /// intermediate values.
  Matrix forward(const Matrix& x) const;

  /// Mean squared error over all elements of one sequence (or frame block)
  /// and its gradient, accumulated into `grad` with weight `scale`.
  /// Returns the sum of squared errors.
  double accumulate_gradient(const Matrix& x, const Matrix& target, double scale, Vector& grad) const;

 private:
  ModelSpec spec_;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const Net> net_;
  Vector theta_;
};

/// Element-wise activation and its derivative expressed through the output.
Matrix activate(const Matrix& z, Activation a);
Matrix activation_grad_from_output(const Matrix& y, Activation a);

}  // namespace daeme::nn

#endif  // DAEME_NN_MODEL_HPP_
