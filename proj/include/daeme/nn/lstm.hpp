// daeme/nn/lstm.hpp

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

#ifndef DAEME_NN_LSTM_HPP_
#define DAEME_NN_LSTM_HPP_

#include <utility>

#include "daeme/common.hpp"
#include "daeme/nn/model.hpp"

namespace daeme::nn {

/// One memory block with peepholes on the cell state:
///   f_t = sig(W_f m_t + U_f c_{t-1} + b_f)
///   i_t = sig(W_i m_t + U_i c_{t-1} + b_i)
///   c_t = f_t * c_{t-1} + i_t * tanh(W_c m_t + b_c)
///   o_t = sig(W_o m_t + U_o c_t + b_o)
///   h_t = o_t * tanh(c_t)
/// where m_t is the layer input concatenated with h_{t-1}.
struct LstmCell {
  Matrix W_f, W_i, W_c, W_o;  ///< cells x m_dim
  Matrix U_f, U_i, U_o;       ///< cells x cells
  Vector b_f, b_i, b_c, b_o;

  static LstmCell zeros(int cells, int m_dim);
  int cells() const { return static_cast<int>(W_f.rows()); }
  int m_dim() const { return static_cast<int>(W_f.cols()); }
};

/// One step of the block above: returns (h_t, c_t).
std::pair<Vector, Vector> lstm_step(const LstmCell& cell, const Vector& m_t, const Vector& c_prev);

/// Copies the parameters of one direction of one BLSTM layer out of a model.
LstmCell blstm_cell(const Model& model, int layer, bool backward);

}  // namespace daeme::nn

#endif  // DAEME_NN_LSTM_HPP_
