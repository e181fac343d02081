// Copyright (c) 2026 The Unifront Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unifront/autodiff.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace unifront {

namespace {

std::string Shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void CheckSameGraph(const Var& a, const Var& b) {
  if (!a.valid() || !b.valid() || a.graph() != b.graph()) {
    throw std::invalid_argument("autodiff: operands belong to different graphs");
  }
}

void CheckSameShape(const char* op, const Var& a, const Var& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                Shape(a.value()) + " vs " + Shape(b.value()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ParameterStore

Parameter& ParameterStore::Create(const std::string& name, int rows, int cols,
                                  Init init, std::mt19937_64* rng) {
  if (by_name_.count(name) > 0) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  Matrix value = Matrix::Zero(rows, cols);
  if (init == Init::kXavier) {
    double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < value.cols(); ++j) {
      for (Eigen::Index i = 0; i < value.rows(); ++i) value(i, j) = dist(*rng);
    }
  } else if (init == Init::kNormal) {
    std::normal_distribution<double> dist(0.0, 0.1);
    for (Eigen::Index j = 0; j < value.cols(); ++j) {
      for (Eigen::Index i = 0; i < value.rows(); ++i) value(i, j) = dist(*rng);
    }
  }
  by_name_[name] = params_.size();
  params_.push_back(std::make_unique<Parameter>(name, std::move(value)));
  return *params_.back();
}

Parameter* ParameterStore::Find(const std::string& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParameterStore::Find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : params_[it->second].get();
}

int64_t ParameterStore::NumElements() const {
  int64_t n = 0;
  for (const auto& p : params_) n += p->value().size();
  return n;
}

void ParameterStore::SetZero() {
  for (auto& p : params_) p->value().setZero();
}

// ---------------------------------------------------------------------------
// Graph

Var Graph::Constant(Matrix value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::Param(const Parameter& param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Var(this, it->second);
  Node node;
  node.value = param.value();
  node.param = &param;
  node.requires_grad = record_;
  nodes_.push_back(std::move(node));
  int id = static_cast<int>(nodes_.size()) - 1;
  param_nodes_[&param] = id;
  return Var(this, id);
}

Var Graph::Record(Matrix value, std::initializer_list<Var> inputs,
                  BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  if (record_) {
    for (const Var& in : inputs) {
      if (nodes_[in.id_].requires_grad) {
        node.requires_grad = true;
        break;
      }
    }
    if (node.requires_grad) node.backward = std::move(backward);
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::Record(Matrix value, const std::vector<Var>& inputs,
                  BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  if (record_) {
    for (const Var& in : inputs) {
      if (nodes_[in.id_].requires_grad) {
        node.requires_grad = true;
        break;
      }
    }
    if (node.requires_grad) node.backward = std::move(backward);
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Graph::Backward(const Var& root) {
  if (!record_) throw std::logic_error("Backward() on a non-recording graph");
  if (root.graph_ != this || root.rows() != 1 || root.cols() != 1) {
    throw std::invalid_argument("Backward() needs a 1x1 root of this graph");
  }
  if (!nodes_[root.id_].requires_grad) return;
  nodes_[root.id_].grad = Matrix::Ones(1, 1);
  for (int id = root.id_; id >= 0; --id) {
    Node& node = nodes_[id];
    if (node.grad.size() == 0) continue;
    if (node.param != nullptr) {
      auto it = param_grads_.find(node.param);
      if (it == param_grads_.end()) {
        param_grads_.emplace(node.param, node.grad);
      } else {
        it->second += node.grad;
      }
    } else if (node.backward) {
      node.backward(node.grad, node.value);
    }
  }
}

const Matrix* Graph::GradOf(const Parameter& param) const {
  auto it = param_grads_.find(&param);
  return it == param_grads_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Scalar helpers

double Softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double LogSumExp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

Matrix SoftmaxRows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    double m = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - m).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ops

namespace ad {

Var MatMul(const Var& a, const Var& b) {
  CheckSameGraph(a, b);
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("MatMul: inner dimension mismatch " +
                                Shape(a.value()) + " * " + Shape(b.value()));
  }
  Graph* g = a.graph();
  return g->Record(a.value() * b.value(), {a, b}, [g, a, b](const Matrix& dy, const Matrix& /*y*/) {
    if (g->RequiresGrad(a)) g->Accumulate(a, dy * b.value().transpose());
    if (g->RequiresGrad(b)) g->Accumulate(b, a.value().transpose() * dy);
  });
}

Var Add(const Var& a, const Var& b) {
  CheckSameGraph(a, b);
  Graph* g = a.graph();
  if (b.rows() == 1 && a.rows() != 1 && b.cols() == a.cols()) {
    Matrix out = a.value().rowwise() + b.value().row(0);
    return g->Record(std::move(out), {a, b}, [g, a, b](const Matrix& dy, const Matrix& /*y*/) {
      g->Accumulate(a, dy);
      if (g->RequiresGrad(b)) g->Accumulate(b, dy.colwise().sum());
    });
  }
  CheckSameShape("Add", a, b);
  return g->Record(a.value() + b.value(), {a, b}, [g, a, b](const Matrix& dy, const Matrix& /*y*/) {
    g->Accumulate(a, dy);
    g->Accumulate(b, dy);
  });
}

Var Sub(const Var& a, const Var& b) {
  CheckSameGraph(a, b);
  CheckSameShape("Sub", a, b);
  Graph* g = a.graph();
  return g->Record(a.value() - b.value(), {a, b}, [g, a, b](const Matrix& dy, const Matrix& /*y*/) {
    g->Accumulate(a, dy);
    g->Accumulate(b, -dy);
  });
}

Var Mul(const Var& a, const Var& b) {
  CheckSameGraph(a, b);
  CheckSameShape("Mul", a, b);
  Graph* g = a.graph();
  Matrix out = a.value().cwiseProduct(b.value());
  return g->Record(std::move(out), {a, b}, [g, a, b](const Matrix& dy, const Matrix& /*y*/) {
    if (g->RequiresGrad(a)) g->Accumulate(a, dy.cwiseProduct(b.value()));
    if (g->RequiresGrad(b)) g->Accumulate(b, dy.cwiseProduct(a.value()));
  });
}

Var Scale(const Var& a, double s) {
  Graph* g = a.graph();
  return g->Record(a.value() * s, {a},
                   [g, a, s](const Matrix& dy, const Matrix& /*y*/) { g->Accumulate(a, dy * s); });
}

Var AddScalar(const Var& a, double s) {
  Graph* g = a.graph();
  Matrix out = a.value().array() + s;
  return g->Record(std::move(out), {a},
                   [g, a](const Matrix& dy, const Matrix& /*y*/) { g->Accumulate(a, dy); });
}

Var Tanh(const Var& a) {
  Graph* g = a.graph();
  Matrix out = a.value().array().tanh();
  return g->Record(std::move(out), {a}, [g, a](const Matrix& dy, const Matrix& y) {
    g->Accumulate(a, dy.array() * (1.0 - y.array().square()));
  });
}

Var Sigmoid(const Var& a) {
  Graph* g = a.graph();
  Matrix out = (1.0 + (-a.value().array()).exp()).inverse();
  return g->Record(std::move(out), {a}, [g, a](const Matrix& dy, const Matrix& y) {
    g->Accumulate(a, dy.array() * y.array() * (1.0 - y.array()));
  });
}

Var Relu(const Var& a) {
  Graph* g = a.graph();
  Matrix out = a.value().cwiseMax(0.0);
  return g->Record(std::move(out), {a}, [g, a](const Matrix& dy, const Matrix& /*y*/) {
    g->Accumulate(a, (a.value().array() > 0.0).cast<double>() * dy.array());
  });
}

Var Softplus(const Var& a) {
  Graph* g = a.graph();
  Matrix out = a.value().unaryExpr([](double x) { return unifront::Softplus(x); });
  return g->Record(std::move(out), {a}, [g, a](const Matrix& dy, const Matrix& /*y*/) {
    Matrix sig = (1.0 + (-a.value().array()).exp()).inverse();
    g->Accumulate(a, dy.cwiseProduct(sig));
  });
}

Var Exp(const Var& a) {
  Graph* g = a.graph();
  Matrix out = a.value().array().exp();
  return g->Record(std::move(out), {a}, [g, a](const Matrix& dy, const Matrix& y) {
    g->Accumulate(a, dy.cwiseProduct(y));
  });
}

Var Transpose(const Var& a) {
  Graph* g = a.graph();
  return g->Record(a.value().transpose(), {a}, [g, a](const Matrix& dy, const Matrix& /*y*/) {
    g->Accumulate(a, dy.transpose());
  });
}

Var ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatCols: no inputs");
  Graph* g = parts[0].graph();
  Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const Var& p : parts) {
    if (p.graph() != g || p.rows() != rows) {
      throw std::invalid_argument("ConcatCols: row count mismatch");
    }
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Eigen::Index offset = 0;
  for (const Var& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
  }
  return g->Record(std::move(out), parts, [g, parts](const Matrix& dy, const Matrix& /*y*/) {
    Eigen::Index off = 0;
    for (const Var& p : parts) {
      if (g->RequiresGrad(p)) g->Accumulate(p, dy.middleCols(off, p.cols()));
      off += p.cols();
    }
  });
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatRows: no inputs");
  Graph* g = parts[0].graph();
  Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  for (const Var& p : parts) {
    if (p.graph() != g || p.cols() != cols) {
      throw std::invalid_argument("ConcatRows: column count mismatch");
    }
    rows += p.rows();
  }
  Matrix out(rows, cols);
  Eigen::Index offset = 0;
  for (const Var& p : parts) {
    out.middleRows(offset, p.rows()) = p.value();
    offset += p.rows();
  }
  return g->Record(std::move(out), parts, [g, parts](const Matrix& dy, const Matrix& /*y*/) {
    Eigen::Index off = 0;
    for (const Var& p : parts) {
      if (g->RequiresGrad(p)) g->Accumulate(p, dy.middleRows(off, p.rows()));
      off += p.rows();
    }
  });
}

Var SliceCols(const Var& a, int start, int count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw std::invalid_argument("SliceCols: range out of bounds");
  }
  Graph* g = a.graph();
  return g->Record(a.value().middleCols(start, count), {a},
                   [g, a, start, count](const Matrix& dy, const Matrix& /*y*/) {
                     Matrix full = Matrix::Zero(a.rows(), a.cols());
                     full.middleCols(start, count) = dy;
                     g->Accumulate(a, full);
                   });
}

Var SliceRows(const Var& a, int start, int count) {
  if (start < 0 || count < 0 || start + count > a.rows()) {
    throw std::invalid_argument("SliceRows: range out of bounds");
  }
  Graph* g = a.graph();
  return g->Record(a.value().middleRows(start, count), {a},
                   [g, a, start, count](const Matrix& dy, const Matrix& /*y*/) {
                     Matrix full = Matrix::Zero(a.rows(), a.cols());
                     full.middleRows(start, count) = dy;
                     g->Accumulate(a, full);
                   });
}

Var ShiftRows(const Var& a, int offset) {
  Graph* g = a.graph();
  const Eigen::Index n = a.rows();
  Matrix out = Matrix::Zero(n, a.cols());
  // out[i] = a[i - offset]
  Eigen::Index lo = std::max<Eigen::Index>(0, offset);
  Eigen::Index hi = std::min<Eigen::Index>(n, n + offset);
  if (hi > lo) out.middleRows(lo, hi - lo) = a.value().middleRows(lo - offset, hi - lo);
  return g->Record(std::move(out), {a}, [g, a, offset, lo, hi](const Matrix& dy, const Matrix& /*y*/) {
    Matrix da = Matrix::Zero(a.rows(), a.cols());
    if (hi > lo) da.middleRows(lo - offset, hi - lo) = dy.middleRows(lo, hi - lo);
    g->Accumulate(a, da);
  });
}

Var Rows(const Var& table, const std::vector<int>& indices) {
  Graph* g = table.graph();
  Matrix out(static_cast<Eigen::Index>(indices.size()), table.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= table.rows()) {
      throw std::out_of_range("Rows: index " + std::to_string(indices[i]) +
                              " outside table of " +
                              std::to_string(table.rows()) + " rows");
    }
    out.row(static_cast<Eigen::Index>(i)) = table.value().row(indices[i]);
  }
  return g->Record(std::move(out), {table}, [g, table, indices](const Matrix& dy, const Matrix& /*y*/) {
    Matrix dt = Matrix::Zero(table.rows(), table.cols());
    for (size_t i = 0; i < indices.size(); ++i) {
      dt.row(indices[i]) += dy.row(static_cast<Eigen::Index>(i));
    }
    g->Accumulate(table, dt);
  });
}

Var Sum(const Var& a) {
  Graph* g = a.graph();
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return g->Record(std::move(out), {a}, [g, a](const Matrix& dy, const Matrix& /*y*/) {
    g->Accumulate(a, Matrix::Constant(a.rows(), a.cols(), dy(0, 0)));
  });
}

Var SoftmaxRows(const Var& a) {
  Graph* g = a.graph();
  return g->Record(unifront::SoftmaxRows(a.value()), {a},
                   [g, a](const Matrix& dy, const Matrix& p) {
                     Eigen::VectorXd dot = dy.cwiseProduct(p).rowwise().sum();
                     g->Accumulate(a, p.cwiseProduct(dy.colwise() - dot));
                   });
}

Var LayerNormRows(const Var& a, const Var& gain, const Var& bias,
                  double epsilon) {
  Graph* g = a.graph();
  const Eigen::Index n = a.cols();
  if (gain.rows() != 1 || gain.cols() != n || bias.rows() != 1 ||
      bias.cols() != n) {
    throw std::invalid_argument("LayerNormRows: gain/bias must be 1x" +
                                std::to_string(n));
  }
  Matrix normed(a.rows(), n);
  Eigen::VectorXd inv_std(a.rows());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    double mean = a.value().row(r).mean();
    Eigen::RowVectorXd centered = a.value().row(r).array() - mean;
    double var = centered.squaredNorm() / static_cast<double>(n);
    inv_std(r) = 1.0 / std::sqrt(var + epsilon);
    normed.row(r) = centered * inv_std(r);
  }
  Matrix out = (normed.array().rowwise() * gain.value().row(0).array()).matrix();
  out.rowwise() += bias.value().row(0);
  Var xhat = g->Constant(std::move(normed));
  return g->Record(std::move(out), {a, gain, bias},
                   [g, a, gain, bias, xhat, inv_std, n](const Matrix& dy, const Matrix& /*y*/) {
                     const Matrix& xh = xhat.value();
                     if (g->RequiresGrad(gain)) {
                       g->Accumulate(gain, dy.cwiseProduct(xh).colwise().sum());
                     }
                     if (g->RequiresGrad(bias)) {
                       g->Accumulate(bias, dy.colwise().sum());
                     }
                     if (g->RequiresGrad(a)) {
                       Matrix dxh = (dy.array().rowwise() *
                                     gain.value().row(0).array()).matrix();
                       Matrix da(dy.rows(), n);
                       const double inv_n = 1.0 / static_cast<double>(n);
                       for (Eigen::Index r = 0; r < dy.rows(); ++r) {
                         double s1 = dxh.row(r).sum();
                         double s2 = dxh.row(r).dot(xh.row(r));
                         da.row(r) = inv_std(r) *
                                     (dxh.row(r).array() - inv_n * s1 -
                                      xh.row(r).array() * (inv_n * s2));
                       }
                       g->Accumulate(a, da);
                     }
                   });
}

Var Dropout(const Var& a, double rate) {
  Graph* g = a.graph();
  if (!g->training() || rate <= 0.0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix mask(a.rows(), a.cols());
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      mask(i, j) = keep(g->rng()) ? scale : 0.0;
    }
  }
  Matrix out = a.value().cwiseProduct(mask);
  return g->Record(std::move(out), {a}, [g, a, mask](const Matrix& dy, const Matrix& /*y*/) {
    g->Accumulate(a, dy.cwiseProduct(mask));
  });
}

Var LstmCell(const Var& gates, const Var& prev_cell) {
  CheckSameGraph(gates, prev_cell);
  const Eigen::Index h = prev_cell.cols();
  if (gates.rows() != 1 || prev_cell.rows() != 1 || gates.cols() != 4 * h) {
    throw std::invalid_argument("LstmCell: expected 1x4H gates and 1xH cell");
  }
  Graph* g = gates.graph();
  const auto& z = gates.value();
  auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  Eigen::RowVectorXd i = z.middleCols(0, h).unaryExpr(sigmoid);
  Eigen::RowVectorXd f = z.middleCols(h, h).unaryExpr(sigmoid);
  Eigen::RowVectorXd u = z.middleCols(2 * h, h).array().tanh();
  Eigen::RowVectorXd o = z.middleCols(3 * h, h).unaryExpr(sigmoid);
  Eigen::RowVectorXd c = f.cwiseProduct(prev_cell.value().row(0)) + i.cwiseProduct(u);
  Eigen::RowVectorXd tc = c.array().tanh();
  Matrix out(1, 2 * h);
  out.leftCols(h) = o.cwiseProduct(tc);
  out.rightCols(h) = c;
  return g->Record(
      std::move(out), {gates, prev_cell},
      [g, gates, prev_cell, i, f, u, o, tc, h](const Matrix& dy, const Matrix& /*y*/) {
        Eigen::RowVectorXd dh = dy.leftCols(h);
        Eigen::RowVectorXd dc = dy.rightCols(h).row(0) +
                                dh.cwiseProduct(o).cwiseProduct(
                                    (1.0 - tc.array().square()).matrix());
        if (g->RequiresGrad(gates)) {
          Matrix dz(1, 4 * h);
          dz.middleCols(0, h) = (dc.array() * u.array() * i.array() * (1.0 - i.array())).matrix();
          dz.middleCols(h, h) = (dc.array() * prev_cell.value().row(0).array() *
                                 f.array() * (1.0 - f.array())).matrix();
          dz.middleCols(2 * h, h) = (dc.array() * i.array() * (1.0 - u.array().square())).matrix();
          dz.middleCols(3 * h, h) = (dh.array() * tc.array() * o.array() * (1.0 - o.array())).matrix();
          g->Accumulate(gates, dz);
        }
        if (g->RequiresGrad(prev_cell)) {
          g->Accumulate(prev_cell, dc.cwiseProduct(f));
        }
      });
}

}  // namespace ad
}  // namespace unifront
