// nn/lstm.cpp

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

#include "daeme/nn/lstm.hpp"

#include <cmath>

#include "net.hpp"

namespace daeme::nn {

LstmCell LstmCell::zeros(int cells, int m_dim) {
  LstmCell c;
  for (Matrix* w : {&c.W_f, &c.W_i, &c.W_c, &c.W_o}) *w = Matrix::Zero(cells, m_dim);
  for (Matrix* u : {&c.U_f, &c.U_i, &c.U_o}) *u = Matrix::Zero(cells, cells);
  for (Vector* b : {&c.b_f, &c.b_i, &c.b_c, &c.b_o}) *b = Vector::Zero(cells);
  return c;
}

std::pair<Vector, Vector> lstm_step(const LstmCell& cell, const Vector& m_t, const Vector& c_prev) {
  const int n = cell.cells();
  if (m_t.size() != cell.m_dim()) throw Error("lstm_step: m_t has the wrong dimension");
  if (c_prev.size() != n) throw Error("lstm_step: c_prev has the wrong dimension");
  auto sig = [](const Vector& v) { return v.unaryExpr([](double x) { return logistic(x); }).eval(); };
  const Vector f = sig(cell.W_f * m_t + cell.U_f * c_prev + cell.b_f);
  const Vector i = sig(cell.W_i * m_t + cell.U_i * c_prev + cell.b_i);
  const Vector c = f.cwiseProduct(c_prev) + i.cwiseProduct((cell.W_c * m_t + cell.b_c).array().tanh().matrix());
  const Vector o = sig(cell.W_o * m_t + cell.U_o * c + cell.b_o);
  const Vector h = o.cwiseProduct(c.array().tanh().matrix());
  return {h, c};
}

namespace {

// Per direction: W (4n x (d+n), gate rows f,i,c,o over [x_t; h_{t-1}]),
// U_f, U_i, U_o (n x n) and b (1 x 4n).
struct CellBlocks {
  ParamBlock W, Uf, Ui, Uo, b;
};

// Per-step values of one direction over a whole sequence, T x n each.
struct CellTrace {
  Matrix F, I, G, O, C, TC, H;
};

class BlstmNet : public Net {
 public:
  explicit BlstmNet(const ModelSpec& s) : Net(s) {
    const int n = s.cells;
    int d = s.in_dim;
    for (int l = 0; l < s.n_layers; ++l) {
      for (int dir = 0; dir < 2; ++dir) {
        const std::string p = "blstm" + std::to_string(l) + (dir == 0 ? ".fwd." : ".bwd.");
        CellBlocks cb;
        cb.W = blocks[add(p + "W", 4 * n, d + n, d + n, n, false)];
        cb.Uf = blocks[add_weight(p + "U_f", n, n)];
        cb.Ui = blocks[add_weight(p + "U_i", n, n)];
        cb.Uo = blocks[add_weight(p + "U_o", n, n)];
        cb.b = blocks[add_bias(p + "b", 4 * n)];
        cells_.push_back(cb);
      }
      d = 2 * n;
    }
    proj_f_ = blocks[add_weight("proj.W_fwd", s.out_dim, n)];
    proj_b_ = blocks[add_weight("proj.W_bwd", s.out_dim, n)];
    proj_bias_ = blocks[add_bias("proj.b", s.out_dim)];
  }

  const CellBlocks& cell_blocks(int layer, bool backward) const { return cells_[2 * layer + (backward ? 1 : 0)]; }

  // Cache layout: per layer the layer input, then for each direction the
  // seven trace matrices (backward direction stored in reversed time).
  Matrix forward(const Vector& th, const Matrix& x, Cache* cache) const override {
    Matrix in = x;
    Matrix hf, hb;
    for (int l = 0; l < spec.n_layers; ++l) {
      CellTrace tf = run(th, cell_blocks(l, false), in);
      CellTrace tb = run(th, cell_blocks(l, true), in.colwise().reverse());
      hf = tf.H;
      hb = tb.H.colwise().reverse();
      if (cache) {
        cache->mats.push_back(in);
        for (CellTrace* t : {&tf, &tb})
          for (Matrix* m : {&t->F, &t->I, &t->G, &t->O, &t->C, &t->TC, &t->H}) cache->mats.push_back(std::move(*m));
      }
      Matrix next(in.rows(), 2 * spec.cells);
      next << hf, hb;
      in = std::move(next);
    }
    Matrix y = hf * view(th, proj_f_).transpose() + hb * view(th, proj_b_).transpose();
    y.rowwise() += view(th, proj_bias_).row(0);
    return y;
  }

  Matrix backward(const Vector& th, const Matrix&, const Matrix& dy, const Cache& cache,
                  Vector& grad) const override {
    const int n = spec.cells;
    const int L = spec.n_layers;
    auto trace = [&](int l, int dir) {
      const std::size_t base = static_cast<std::size_t>(l) * 15 + 1 + static_cast<std::size_t>(dir) * 7;
      const auto& m = cache.mats;
      return CellTrace{m[base], m[base + 1], m[base + 2], m[base + 3], m[base + 4], m[base + 5], m[base + 6]};
    };
    const CellTrace last_f = trace(L - 1, 0), last_b = trace(L - 1, 1);
    const Matrix hf = last_f.H;
    const Matrix hb = last_b.H.colwise().reverse();
    view(grad, proj_f_).noalias() += dy.transpose() * hf;
    view(grad, proj_b_).noalias() += dy.transpose() * hb;
    view(grad, proj_bias_).row(0) += dy.colwise().sum();
    Matrix dhf = dy * view(th, proj_f_);
    Matrix dhb = dy * view(th, proj_b_);

    Matrix din;
    for (int l = L - 1; l >= 0; --l) {
      const Matrix& in = cache.mats[static_cast<std::size_t>(l) * 15];
      Matrix dx = back(th, cell_blocks(l, false), trace(l, 0), in, dhf, grad);
      Matrix dxr = back(th, cell_blocks(l, true), trace(l, 1), in.colwise().reverse(), dhb.colwise().reverse(), grad);
      din = dx + dxr.colwise().reverse();
      if (l > 0) {
        dhf = din.leftCols(n);
        dhb = din.rightCols(n);
      }
    }
    return din;
  }

 private:
  CellTrace run(const Vector& th, const CellBlocks& cb, const Matrix& x) const {
    const int n = spec.cells;
    const Eigen::Index T = x.rows(), d = x.cols();
    const CMap W = view(th, cb.W);
    const CMap Uf = view(th, cb.Uf), Ui = view(th, cb.Ui), Uo = view(th, cb.Uo);
    Matrix A = x * W.leftCols(d).transpose();
    A.rowwise() += view(th, cb.b).row(0);
    const auto Wh = W.rightCols(n);

    CellTrace t{Matrix(T, n), Matrix(T, n), Matrix(T, n), Matrix(T, n), Matrix(T, n), Matrix(T, n), Matrix(T, n)};
    RowVector h = RowVector::Zero(n), c = RowVector::Zero(n);
    for (Eigen::Index s = 0; s < T; ++s) {
      RowVector a = A.row(s) + h * Wh.transpose();
      RowVector f = (a.segment(0, n) + c * Uf.transpose()).unaryExpr([](double v) { return logistic(v); });
      RowVector i = (a.segment(n, n) + c * Ui.transpose()).unaryExpr([](double v) { return logistic(v); });
      RowVector g = a.segment(2 * n, n).array().tanh().matrix();
      RowVector cn = f.cwiseProduct(c) + i.cwiseProduct(g);
      RowVector o = (a.segment(3 * n, n) + cn * Uo.transpose()).unaryExpr([](double v) { return logistic(v); });
      RowVector tc = cn.array().tanh().matrix();
      h = o.cwiseProduct(tc);
      c = cn;
      t.F.row(s) = f;
      t.I.row(s) = i;
      t.G.row(s) = g;
      t.O.row(s) = o;
      t.C.row(s) = c;
      t.TC.row(s) = tc;
      t.H.row(s) = h;
    }
    return t;
  }

  // Backpropagation through time for one direction; returns d(loss)/dx.
  Matrix back(const Vector& th, const CellBlocks& cb, const CellTrace& t, const Matrix& x, const Matrix& dH,
              Vector& grad) const {
    const int n = spec.cells;
    const Eigen::Index T = x.rows(), d = x.cols();
    const CMap W = view(th, cb.W);
    const CMap Uf = view(th, cb.Uf), Ui = view(th, cb.Ui), Uo = view(th, cb.Uo);
    const auto Wh = W.rightCols(n);
    MMap gUf = view(grad, cb.Uf), gUi = view(grad, cb.Ui), gUo = view(grad, cb.Uo);

    Matrix dA(T, 4 * n);
    RowVector dh_next = RowVector::Zero(n), dc_next = RowVector::Zero(n);
    const RowVector zero = RowVector::Zero(n);
    for (Eigen::Index s = T - 1; s >= 0; --s) {
      const RowVector cp = s > 0 ? RowVector(t.C.row(s - 1)) : zero;
      const auto f = t.F.row(s), i = t.I.row(s), g = t.G.row(s), o = t.O.row(s), tc = t.TC.row(s), c = t.C.row(s);
      const RowVector dh = dH.row(s) + dh_next;
      RowVector dc = dc_next + dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix());
      const RowVector dao = dh.cwiseProduct(tc).cwiseProduct(o).cwiseProduct((1.0 - o.array()).matrix());
      dc += dao * Uo;
      gUo.noalias() += dao.transpose() * c;
      const RowVector daf = dc.cwiseProduct(cp).cwiseProduct(f).cwiseProduct((1.0 - f.array()).matrix());
      const RowVector dai = dc.cwiseProduct(g).cwiseProduct(i).cwiseProduct((1.0 - i.array()).matrix());
      const RowVector dag = dc.cwiseProduct(i).cwiseProduct((1.0 - g.array().square()).matrix());
      gUf.noalias() += daf.transpose() * cp;
      gUi.noalias() += dai.transpose() * cp;
      dc_next = dc.cwiseProduct(f) + daf * Uf + dai * Ui;
      dA.block(s, 0, 1, n) = daf;
      dA.block(s, n, 1, n) = dai;
      dA.block(s, 2 * n, 1, n) = dag;
      dA.block(s, 3 * n, 1, n) = dao;
      dh_next = dA.row(s) * Wh;
    }
    Matrix m(T, d + n);
    m.leftCols(d) = x;
    m.rightCols(n).row(0).setZero();
    if (T > 1) m.rightCols(n).bottomRows(T - 1) = t.H.topRows(T - 1);
    view(grad, cb.W).noalias() += dA.transpose() * m;
    view(grad, cb.b).row(0) += dA.colwise().sum();
    return dA * W.leftCols(d);
  }

  std::vector<CellBlocks> cells_;
  ParamBlock proj_f_, proj_b_, proj_bias_;
};

}  // namespace

std::shared_ptr<const Net> make_blstm_net(const ModelSpec& spec) { return std::make_shared<BlstmNet>(spec); }

LstmCell blstm_cell(const Model& model, int layer, bool backward) {
  if (model.spec().arch != Arch::BLSTM) throw Error("blstm_cell: model is not a BLSTM");
  if (layer < 0 || layer >= model.spec().n_layers) throw Error("blstm_cell: no such layer");
  const std::string p = "blstm" + std::to_string(layer) + (backward ? ".bwd." : ".fwd.");
  const Vector& th = model.parameters();
  const int n = model.spec().cells;
  const CMap W = view(th, model.block(p + "W"));
  const CMap b = view(th, model.block(p + "b"));
  LstmCell c;
  c.W_f = W.middleRows(0, n);
  c.W_i = W.middleRows(n, n);
  c.W_c = W.middleRows(2 * n, n);
  c.W_o = W.middleRows(3 * n, n);
  c.U_f = view(th, model.block(p + "U_f"));
  c.U_i = view(th, model.block(p + "U_i"));
  c.U_o = view(th, model.block(p + "U_o"));
  c.b_f = b.row(0).segment(0, n).transpose();
  c.b_i = b.row(0).segment(n, n).transpose();
  c.b_c = b.row(0).segment(2 * n, n).transpose();
  c.b_o = b.row(0).segment(3 * n, n).transpose();
  return c;
}

}  // namespace daeme::nn
