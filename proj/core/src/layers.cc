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

#include "unifront/layers.h"

#include <cmath>
#include <stdexcept>

namespace unifront {

Linear::Linear(ParameterStore* store, const std::string& name, int in, int out,
               std::mt19937_64* rng)
    : in_(in), out_(out) {
  weight_ = &store->Create(name + ".weight", in, out, Init::kXavier, rng);
  bias_ = &store->Create(name + ".bias", 1, out, Init::kZeros, rng);
}

Var Linear::Forward(Graph& g, const Var& x) const {
  if (x.cols() != in_) {
    throw std::invalid_argument("Linear: expected input width " +
                                std::to_string(in_) + ", got " +
                                std::to_string(x.cols()));
  }
  return ad::Add(ad::MatMul(x, g.Param(*weight_)), g.Param(*bias_));
}

LayerNorm::LayerNorm(ParameterStore* store, const std::string& name, int width) {
  Parameter& gain = store->Create(name + ".gain", 1, width, Init::kZeros, nullptr);
  gain.value().setOnes();
  gain_ = &gain;
  bias_ = &store->Create(name + ".bias", 1, width, Init::kZeros, nullptr);
}

Var LayerNorm::Forward(Graph& g, const Var& x) const {
  return ad::LayerNormRows(x, g.Param(*gain_), g.Param(*bias_));
}

Lstm::Lstm(ParameterStore* store, const std::string& name, int in, int units,
           std::mt19937_64* rng)
    : in_(in), units_(units) {
  w_input_ = &store->Create(name + ".w_input", in, 4 * units, Init::kXavier, rng);
  w_hidden_ = &store->Create(name + ".w_hidden", units, 4 * units, Init::kXavier, rng);
  Parameter& b = store->Create(name + ".bias", 1, 4 * units, Init::kZeros, rng);
  b.value().middleCols(units, units).setOnes();
  bias_ = &b;
}

LstmState Lstm::ZeroState(Graph& g) const {
  return {g.Constant(Matrix::Zero(1, units_)), g.Constant(Matrix::Zero(1, units_))};
}

LstmState Lstm::StepFromInputGates(Graph& g, const Var& input_gates,
                                   const LstmState& prev) const {
  Var gates = ad::Add(input_gates, ad::MatMul(prev.h, g.Param(*w_hidden_)));
  Var hc = ad::LstmCell(gates, prev.c);
  return {ad::SliceCols(hc, 0, units_), ad::SliceCols(hc, units_, units_)};
}

LstmState Lstm::Step(Graph& g, const Var& x_row, const LstmState& prev) const {
  if (x_row.cols() != in_) {
    throw std::invalid_argument("Lstm: expected input width " +
                                std::to_string(in_) + ", got " +
                                std::to_string(x_row.cols()));
  }
  Var input_gates = ad::Add(ad::MatMul(x_row, g.Param(*w_input_)), g.Param(*bias_));
  return StepFromInputGates(g, input_gates, prev);
}

Var Lstm::Forward(Graph& g, const Var& x) const {
  if (x.cols() != in_) {
    throw std::invalid_argument("Lstm: expected input width " +
                                std::to_string(in_) + ", got " +
                                std::to_string(x.cols()));
  }
  Var all_gates = ad::Add(ad::MatMul(x, g.Param(*w_input_)), g.Param(*bias_));
  LstmState state = ZeroState(g);
  std::vector<Var> outputs;
  outputs.reserve(x.rows());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    state = StepFromInputGates(g, ad::SliceRows(all_gates, static_cast<int>(t), 1), state);
    outputs.push_back(state.h);
  }
  return ad::ConcatRows(outputs);
}

Conv1d::Conv1d(ParameterStore* store, const std::string& name, int in, int out,
               int kernel, int dilation, std::mt19937_64* rng)
    : in_(in), kernel_(kernel), dilation_(dilation) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw std::invalid_argument("Conv1d: kernel size must be odd");
  }
  weight_ = &store->Create(name + ".weight", kernel * in, out, Init::kXavier, rng);
  bias_ = &store->Create(name + ".bias", 1, out, Init::kZeros, rng);
}

Var Conv1d::Forward(Graph& g, const Var& x) const {
  if (x.cols() != in_) {
    throw std::invalid_argument("Conv1d: expected input width " +
                                std::to_string(in_) + ", got " +
                                std::to_string(x.cols()));
  }
  // Tap k reads position t + (k - center) * dilation.
  const int center = kernel_ / 2;
  std::vector<Var> taps;
  taps.reserve(kernel_);
  for (int k = 0; k < kernel_; ++k) {
    int offset = (center - k) * dilation_;
    taps.push_back(offset == 0 ? x : ad::ShiftRows(x, offset));
  }
  Var stacked = kernel_ == 1 ? taps[0] : ad::ConcatCols(taps);
  return ad::Add(ad::MatMul(stacked, g.Param(*weight_)), g.Param(*bias_));
}

MultiHeadAttention::MultiHeadAttention(ParameterStore* store,
                                       const std::string& name, int width,
                                       int heads, std::mt19937_64* rng)
    : width_(width), heads_(heads) {
  if (heads < 1 || width % heads != 0) {
    throw std::invalid_argument("attention heads (" + std::to_string(heads) +
                                ") must divide width " + std::to_string(width));
  }
  query_ = Linear(store, name + ".query", width, width, rng);
  key_ = Linear(store, name + ".key", width, width, rng);
  value_ = Linear(store, name + ".value", width, width, rng);
  output_ = Linear(store, name + ".output", width, width, rng);
}

Var MultiHeadAttention::ProjectQuery(Graph& g, const Var& x) const {
  return query_.Forward(g, x);
}
Var MultiHeadAttention::ProjectKey(Graph& g, const Var& x) const {
  return key_.Forward(g, x);
}
Var MultiHeadAttention::ProjectValue(Graph& g, const Var& x) const {
  return value_.Forward(g, x);
}

Var MultiHeadAttention::Attend(Graph& g, const Var& q, const Var& k,
                               const Var& v) const {
  const int head_dim = width_ / heads_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  std::vector<Var> heads;
  heads.reserve(heads_);
  for (int h = 0; h < heads_; ++h) {
    Var qh = heads_ == 1 ? q : ad::SliceCols(q, h * head_dim, head_dim);
    Var kh = heads_ == 1 ? k : ad::SliceCols(k, h * head_dim, head_dim);
    Var vh = heads_ == 1 ? v : ad::SliceCols(v, h * head_dim, head_dim);
    Var weights = ad::SoftmaxRows(ad::Scale(ad::MatMul(qh, ad::Transpose(kh)), scale));
    heads.push_back(ad::MatMul(weights, vh));
  }
  Var joined = heads_ == 1 ? heads[0] : ad::ConcatCols(heads);
  return output_.Forward(g, joined);
}

Var MultiHeadAttention::Forward(Graph& g, const Var& x) const {
  return Attend(g, ProjectQuery(g, x), ProjectKey(g, x), ProjectValue(g, x));
}

SelfAttentionBlock::SelfAttentionBlock(ParameterStore* store,
                                       const std::string& name, int width,
                                       int heads, double dropout,
                                       std::mt19937_64* rng)
    : dropout_(dropout) {
  attention_ = MultiHeadAttention(store, name + ".attention", width, heads, rng);
  norm1_ = LayerNorm(store, name + ".norm1", width);
  ff1_ = Linear(store, name + ".ff1", width, 2 * width, rng);
  ff2_ = Linear(store, name + ".ff2", 2 * width, width, rng);
  norm2_ = LayerNorm(store, name + ".norm2", width);
}

Var SelfAttentionBlock::FeedForward(Graph& g, const Var& h) const {
  Var inner = ad::Relu(ff1_.Forward(g, h));
  Var out = ad::Dropout(ff2_.Forward(g, inner), dropout_);
  return norm2_.Forward(g, ad::Add(h, out));
}

Var SelfAttentionBlock::Forward(Graph& g, const Var& x) const {
  Var attended = ad::Dropout(attention_.Forward(g, x), dropout_);
  Var h = norm1_.Forward(g, ad::Add(x, attended));
  return FeedForward(g, h);
}

Var SelfAttentionBlock::Step(Graph& g, const Var& x_row, std::vector<Var>* keys,
                             std::vector<Var>* values) const {
  keys->push_back(attention_.ProjectKey(g, x_row));
  values->push_back(attention_.ProjectValue(g, x_row));
  Var k = keys->size() == 1 ? keys->front() : ad::ConcatRows(*keys);
  Var v = values->size() == 1 ? values->front() : ad::ConcatRows(*values);
  Var attended = ad::Dropout(
      attention_.Attend(g, attention_.ProjectQuery(g, x_row), k, v), dropout_);
  Var h = norm1_.Forward(g, ad::Add(x_row, attended));
  return FeedForward(g, h);
}

Matrix SinusoidalPositions(int length, int width) {
  Matrix pe(length, width);
  for (int pos = 0; pos < length; ++pos) {
    for (int i = 0; i < width; ++i) {
      double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / width);
      pe(pos, i) = i % 2 == 0 ? std::sin(pos * rate) : std::cos(pos * rate);
    }
  }
  return pe;
}

}  // namespace unifront
