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

#ifndef UNIFRONT_LAYERS_H_
#define UNIFRONT_LAYERS_H_

#include <random>
#include <string>
#include <vector>

#include "unifront/autodiff.h"

namespace unifront {

// Row-major convention throughout: a sequence is a T x width matrix.

class Linear {
 public:
  Linear() = default;
  Linear(ParameterStore* store, const std::string& name, int in, int out,
         std::mt19937_64* rng);
  Var Forward(Graph& g, const Var& x) const;
  int in() const { return in_; }
  int out() const { return out_; }

 private:
  const Parameter* weight_ = nullptr;
  const Parameter* bias_ = nullptr;
  int in_ = 0;
  int out_ = 0;
};

class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(ParameterStore* store, const std::string& name, int width);
  Var Forward(Graph& g, const Var& x) const;

 private:
  const Parameter* gain_ = nullptr;
  const Parameter* bias_ = nullptr;
};

struct LstmState {
  Var h;
  Var c;
};

class Lstm {
 public:
  Lstm() = default;
  Lstm(ParameterStore* store, const std::string& name, int in, int units,
       std::mt19937_64* rng);
  // Runs over all rows of x; returns T x units hidden states.
  Var Forward(Graph& g, const Var& x) const;
  LstmState ZeroState(Graph& g) const;
  LstmState Step(Graph& g, const Var& x_row, const LstmState& prev) const;
  int units() const { return units_; }

 private:
  LstmState StepFromInputGates(Graph& g, const Var& input_gates,
                               const LstmState& prev) const;

  const Parameter* w_input_ = nullptr;   // in x 4H
  const Parameter* w_hidden_ = nullptr;  // H x 4H
  const Parameter* bias_ = nullptr;      // 1 x 4H, forget gate starts at 1
  int in_ = 0;
  int units_ = 0;
};

// "Same" 1-D convolution over rows with zero padding.
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(ParameterStore* store, const std::string& name, int in, int out,
         int kernel, int dilation, std::mt19937_64* rng);
  Var Forward(Graph& g, const Var& x) const;
  int kernel() const { return kernel_; }
  int dilation() const { return dilation_; }

 private:
  const Parameter* weight_ = nullptr;  // kernel*in x out
  const Parameter* bias_ = nullptr;
  int in_ = 0;
  int kernel_ = 1;
  int dilation_ = 1;
};

// Scaled dot-product attention over `heads` column groups.
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore* store, const std::string& name, int width,
                     int heads, std::mt19937_64* rng);
  Var ProjectQuery(Graph& g, const Var& x) const;
  Var ProjectKey(Graph& g, const Var& x) const;
  Var ProjectValue(Graph& g, const Var& x) const;
  // q: n x width, k/v: m x width (already projected). Returns n x width.
  Var Attend(Graph& g, const Var& q, const Var& k, const Var& v) const;
  Var Forward(Graph& g, const Var& x) const;
  int width() const { return width_; }

 private:
  Linear query_, key_, value_, output_;
  int width_ = 0;
  int heads_ = 1;
};

// Self-attention + position-wise feed-forward, each with a residual and
// layer normalization.
class SelfAttentionBlock {
 public:
  SelfAttentionBlock() = default;
  SelfAttentionBlock(ParameterStore* store, const std::string& name, int width,
                     int heads, double dropout, std::mt19937_64* rng);
  Var Forward(Graph& g, const Var& x) const;

  // Causal incremental form: `x_row` is the newest position; its key and
  // value are appended to the caches before attending.
  Var Step(Graph& g, const Var& x_row, std::vector<Var>* keys,
           std::vector<Var>* values) const;

 private:
  Var FeedForward(Graph& g, const Var& h) const;

  MultiHeadAttention attention_;
  LayerNorm norm1_, norm2_;
  Linear ff1_, ff2_;
  double dropout_ = 0.0;
};

// Sinusoidal position table, rows = positions.
Matrix SinusoidalPositions(int length, int width);

}  // namespace unifront

#endif  // UNIFRONT_LAYERS_H_
