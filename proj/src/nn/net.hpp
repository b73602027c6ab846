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

// nn/net.hpp (private)

#ifndef DAEME_SRC_NN_NET_HPP_
#define DAEME_SRC_NN_NET_HPP_

#include <memory>
#include <string>
#include <vector>

#include "daeme/nn/model.hpp"

namespace daeme::nn {

using CMap = Eigen::Map<const Matrix>;
using MMap = Eigen::Map<Matrix>;

inline CMap view(const Vector& th, const ParamBlock& b) { return CMap(th.data() + b.offset, b.rows, b.cols); }
inline MMap view(Vector& th, const ParamBlock& b) { return MMap(th.data() + b.offset, b.rows, b.cols); }

class Net {
 public:
  explicit Net(const ModelSpec& s) : spec(s) {}
  virtual ~Net() = default;

  virtual Matrix forward(const Vector& th, const Matrix& x, Cache* cache) const = 0;
  /// Adds d(loss)/d(theta) to `grad` given d(loss)/d(output); returns d(loss)/d(input).
  virtual Matrix backward(const Vector& th, const Matrix& x, const Matrix& dy, const Cache& cache,
                          Vector& grad) const = 0;

  ModelSpec spec;
  std::vector<ParamBlock> blocks;
  Eigen::Index total = 0;

 protected:
  int add(std::string name, Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out, bool bias) {
    blocks.push_back({std::move(name), total, rows, cols, fan_in, fan_out, bias});
    total += rows * cols;
    return static_cast<int>(blocks.size()) - 1;
  }
  int add_weight(std::string name, Eigen::Index rows, Eigen::Index cols) {
    return add(std::move(name), rows, cols, static_cast<double>(cols), static_cast<double>(rows), false);
  }
  int add_bias(std::string name, Eigen::Index n) { return add(std::move(name), 1, n, 0, 0, true); }
};

std::shared_ptr<const Net> make_net(const ModelSpec& spec);
std::shared_ptr<const Net> make_blstm_net(const ModelSpec& spec);

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace daeme::nn

#endif  // DAEME_SRC_NN_NET_HPP_
