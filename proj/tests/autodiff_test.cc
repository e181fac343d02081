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

#include <gtest/gtest.h>

#include "test_util.h"
#include "unifront/layers.h"

namespace unifront {
namespace {

using testing::CheckGradients;
using testing::RandomMatrix;

class OpGradientTest : public ::testing::Test {
 protected:
  void SetUp() override {
    a_ = &store_.Create("a", 3, 4, Init::kZeros, nullptr);
    b_ = &store_.Create("b", 4, 2, Init::kZeros, nullptr);
    row_ = &store_.Create("row", 1, 4, Init::kZeros, nullptr);
    a_->value() = RandomMatrix(3, 4, rng_);
    b_->value() = RandomMatrix(4, 2, rng_);
    row_->value() = RandomMatrix(1, 4, rng_);
  }

  void ExpectGradOk(const std::function<Var(Graph&)>& f, double tol = 1e-6) {
    auto r = CheckGradients({&store_}, f);
    EXPECT_LT(r.max_rel_error, tol) << r.worst;
  }

  // Weighted sum so every output entry gets a distinct upstream gradient.
  static Var Reduce(Graph& g, const Var& y) {
    Matrix w(y.rows(), y.cols());
    for (int c = 0; c < w.cols(); ++c) {
      for (int r = 0; r < w.rows(); ++r) w(r, c) = 0.3 + 0.17 * r - 0.11 * c;
    }
    return ad::Sum(ad::Mul(y, g.Constant(w)));
  }

  std::mt19937_64 rng_{42};
  ParameterStore store_;
  Parameter* a_;
  Parameter* b_;
  Parameter* row_;
};

TEST_F(OpGradientTest, MatMulAndBroadcastAdd) {
  ExpectGradOk([&](Graph& g) {
    return Reduce(g, ad::MatMul(ad::Add(g.Param(*a_), g.Param(*row_)), g.Param(*b_)));
  });
}

TEST_F(OpGradientTest, ElementwiseUnaries) {
  ExpectGradOk([&](Graph& g) {
    Var a = g.Param(*a_);
    Var y = ad::Add(ad::Tanh(a), ad::Sigmoid(a));
    y = ad::Add(y, ad::Softplus(a));
    y = ad::Add(y, ad::Exp(ad::Scale(a, 0.5)));
    y = ad::Sub(y, ad::Mul(a, a));
    return Reduce(g, ad::AddScalar(y, 2.0));
  });
}

TEST_F(OpGradientTest, SoftmaxAndLayerNorm) {
  ParameterStore extra;
  ExpectGradOk([&](Graph& g) {
    Var a = g.Param(*a_);
    Var row = g.Param(*row_);
    Var y = ad::LayerNormRows(a, row, ad::Scale(row, -0.5));
    return Reduce(g, ad::Add(ad::SoftmaxRows(a), y));
  });
}

TEST_F(OpGradientTest, StructuralOps) {
  ExpectGradOk([&](Graph& g) {
    Var a = g.Param(*a_);
    Var t = ad::Transpose(a);                              // 4x3
    Var cat = ad::ConcatCols({a, ad::SliceCols(a, 1, 2)});  // 3x6
    Var rows = ad::ConcatRows({ad::SliceRows(cat, 0, 2), ad::ShiftRows(cat, 1),
                               ad::ShiftRows(cat, -2)});
    Var gathered = ad::Rows(t, {3, 0, 0, 2});
    return ad::Add(Reduce(g, rows), Reduce(g, gathered));
  });
}

TEST_F(OpGradientTest, LstmCell) {
  ParameterStore s;
  Parameter& gates = s.Create("gates", 1, 12, Init::kZeros, nullptr);
  Parameter& cell = s.Create("cell", 1, 3, Init::kZeros, nullptr);
  gates.value() = RandomMatrix(1, 12, rng_);
  cell.value() = RandomMatrix(1, 3, rng_);
  auto r = CheckGradients({&s}, [&](Graph& g) {
    return Reduce(g, ad::LstmCell(g.Param(gates), g.Param(cell)));
  });
  EXPECT_LT(r.max_rel_error, 1e-6) << r.worst;
}

TEST(LayerGradientTest, LstmConvAttention) {
  std::mt19937_64 rng(7);
  ParameterStore store;
  Lstm lstm(&store, "lstm", 3, 4, &rng);
  Conv1d conv(&store, "conv", 4, 4, 3, 2, &rng);
  SelfAttentionBlock block(&store, "block", 4, 2, 0.0, &rng);
  Matrix x = RandomMatrix(5, 3, rng);
  Matrix w = RandomMatrix(5, 4, rng);
  auto r = CheckGradients({&store}, [&](Graph& g) {
    Var h = lstm.Forward(g, g.Constant(x));
    Var c = ad::Tanh(conv.Forward(g, h));
    Var y = block.Forward(g, c);
    return ad::Sum(ad::Mul(y, g.Constant(w)));
  });
  EXPECT_LT(r.max_rel_error, 1e-5) << r.worst;
}

TEST(GraphTest, NonRecordingGraphKeepsValuesOnly) {
  ParameterStore store;
  Parameter& p = store.Create("p", 2, 2, Init::kZeros, nullptr);
  p.value() << 1, 2, 3, 4;
  Graph g(false);
  Var y = ad::Sum(ad::Mul(g.Param(p), g.Param(p)));
  EXPECT_DOUBLE_EQ(y.scalar(), 30.0);
  EXPECT_THROW(g.Backward(y), std::logic_error);
}

TEST(GraphTest, DropoutOnlyInTraining) {
  ParameterStore store;
  Parameter& p = store.Create("p", 4, 4, Init::kZeros, nullptr);
  p.value().setOnes();
  Graph eval(true, false, 3);
  EXPECT_EQ(ad::Dropout(eval.Param(p), 0.5).value(), p.value());
  Graph train(true, true, 3);
  Matrix dropped = ad::Dropout(train.Param(p), 0.5).value();
  EXPECT_NE(dropped, p.value());
  for (int i = 0; i < 16; ++i) {
    double v = dropped.data()[i];
    EXPECT_TRUE(v == 0.0 || v == 2.0);
  }
}

TEST(GraphTest, ShapeMismatchThrows) {
  Graph g;
  Var a = g.Constant(Matrix::Zero(2, 3));
  Var b = g.Constant(Matrix::Zero(2, 2));
  EXPECT_THROW(ad::MatMul(a, b), std::invalid_argument);
  EXPECT_THROW(ad::Mul(a, b), std::invalid_argument);
  EXPECT_THROW(ad::SliceCols(a, 2, 2), std::invalid_argument);
}

}  // namespace
}  // namespace unifront
