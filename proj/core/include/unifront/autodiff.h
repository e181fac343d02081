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

#ifndef UNIFRONT_AUTODIFF_H_
#define UNIFRONT_AUTODIFF_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace unifront {

using Matrix = Eigen::MatrixXd;

// A named trainable matrix. Owned by a ParameterStore; addresses are stable.
class Parameter {
 public:
  Parameter(std::string name, Matrix value)
      : name_(std::move(name)), value_(std::move(value)) {}

  const std::string& name() const { return name_; }
  Matrix& value() { return value_; }
  const Matrix& value() const { return value_; }

 private:
  std::string name_;
  Matrix value_;
};

enum class Init { kZeros, kXavier, kNormal };

class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  // Names must be unique within a store.
  Parameter& Create(const std::string& name, int rows, int cols, Init init,
                    std::mt19937_64* rng);
  Parameter* Find(const std::string& name);
  const Parameter* Find(const std::string& name) const;

  size_t size() const { return params_.size(); }
  Parameter& at(size_t i) { return *params_[i]; }
  const Parameter& at(size_t i) const { return *params_[i]; }
  int64_t NumElements() const;
  void SetZero();

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, size_t> by_name_;
};

class Graph;

// Handle to a node of a Graph. Cheap to copy; only valid while the graph
// lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  bool valid() const { return graph_ != nullptr; }
  Graph* graph() const { return graph_; }
  int id() const { return id_; }
  // Convenience for 1x1 nodes.
  double scalar() const { return value()(0, 0); }

 private:
  friend class Graph;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Dynamic reverse-mode tape. Nodes are appended in topological order, so
// Backward() walks them in reverse. A graph built with record=false keeps
// only forward values; that is the inference path.
class Graph {
 public:
  // Receives the output gradient and the output value.
  using BackwardFn =
      std::function<void(const Matrix& out_grad, const Matrix& out_value)>;

  explicit Graph(bool record = true, bool training = false,
                 uint64_t seed = 0)
      : record_(record), training_(training), rng_(seed) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const { return record_; }
  bool training() const { return training_; }
  void set_training(bool training) { training_ = training; }
  std::mt19937_64& rng() { return rng_; }

  Var Constant(Matrix value);
  // Leaf bound to a parameter; repeated calls return the same node.
  Var Param(const Parameter& param);

  // Appends an op node. `backward` is kept only when recording and at least
  // one input needs a gradient.
  Var Record(Matrix value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var Record(Matrix value, const std::vector<Var>& inputs,
             BackwardFn backward);

  bool RequiresGrad(const Var& v) const { return nodes_[v.id_].requires_grad; }

  // Adds `contribution` to the gradient of `v`; no-op if v needs no grad.
  template <typename Derived>
  void Accumulate(const Var& v, const Eigen::MatrixBase<Derived>& contribution) {
    Node& node = nodes_[v.id_];
    if (!node.requires_grad) return;
    if (node.grad.size() == 0) {
      node.grad = contribution;
    } else {
      node.grad += contribution;
    }
  }
  template <typename Derived>
  void Accumulate(const Var& v, const Eigen::ArrayBase<Derived>& contribution) {
    Accumulate(v, contribution.matrix());
  }

  // Seeds d(root)/d(root) = 1 for a 1x1 root and propagates.
  void Backward(const Var& root);

  const Matrix& value(int id) const { return nodes_[id].value; }
  // Gradient of a node after Backward(); empty matrix if none flowed.
  const Matrix& GradOf(const Var& v) const { return nodes_[v.id_].grad; }
  // Gradient accumulated for a parameter, or nullptr.
  const Matrix* GradOf(const Parameter& param) const;
  const std::unordered_map<const Parameter*, Matrix>& param_grads() const {
    return param_grads_;
  }
  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    BackwardFn backward;
    const Parameter* param = nullptr;
    bool requires_grad = false;
  };

  bool record_;
  bool training_;
  std::mt19937_64 rng_;
  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  std::unordered_map<const Parameter*, Matrix> param_grads_;
};

inline const Matrix& Var::value() const { return graph_->value(id_); }

// Differentiable primitives. Shapes are checked; mismatches throw
// std::invalid_argument.
namespace ad {

Var MatMul(const Var& a, const Var& b);
// b may match a's shape or be a 1 x cols row broadcast over a's rows.
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, double s);
Var AddScalar(const Var& a, double s);
Var Tanh(const Var& a);
Var Sigmoid(const Var& a);
Var Relu(const Var& a);
Var Softplus(const Var& a);
Var Exp(const Var& a);
Var Transpose(const Var& a);
Var ConcatCols(const std::vector<Var>& parts);
Var ConcatRows(const std::vector<Var>& parts);
Var SliceCols(const Var& a, int start, int count);
Var SliceRows(const Var& a, int start, int count);
// Row i of the result is row i - offset of a, zero outside range.
Var ShiftRows(const Var& a, int offset);
// Gathers rows of `table` by index.
Var Rows(const Var& table, const std::vector<int>& indices);
Var Sum(const Var& a);
Var SoftmaxRows(const Var& a);
// Per-row normalization followed by the affine gain/bias (1 x cols each).
Var LayerNormRows(const Var& a, const Var& gain, const Var& bias,
                  double epsilon = 1e-5);
// Inverted dropout; identity when the graph is not in training mode.
Var Dropout(const Var& a, double rate);
// Fused LSTM cell. `gates` is 1 x 4H laid out [input, forget, cell, output];
// returns 1 x 2H laid out [h, c].
Var LstmCell(const Var& gates, const Var& prev_cell);

}  // namespace ad

// Numerically stable helpers shared by ops and plain-value code.
double Softplus(double x);
double LogSumExp(const Eigen::Ref<const Eigen::VectorXd>& v);
Matrix SoftmaxRows(const Matrix& logits);

}  // namespace unifront

#endif  // UNIFRONT_AUTODIFF_H_
