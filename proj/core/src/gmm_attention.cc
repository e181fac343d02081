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


#include "unifront/gmm_attention.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace unifront {

namespace {

void CheckStepArgs(Eigen::Index raw_cols, int memory_length,
                   const GmmAttentionConfig& config) {
  if (config.mixtures < 1) {
    throw std::invalid_argument("GMM attention needs at least one mixture");
  }
  if (memory_length < 1) {
    throw std::invalid_argument("GMM attention: memory length must be >= 1, got " +
                                std::to_string(memory_length));
  }
  if (raw_cols != 3 * config.mixtures) {
    throw std::invalid_argument("GMM attention: expected " +
                                std::to_string(3 * config.mixtures) +
                                " raw parameters, got " + std::to_string(raw_cols));
  }
}

double KernelScale(double sigma, bool normalized) {
  return normalized ? 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi)) : 1.0;
}

}  // namespace

Eigen::RowVectorXd MixtureWeights(const Eigen::RowVectorXd& means,
                                  const Eigen::RowVectorXd& sigma,
                                  const Eigen::RowVectorXd& mixture, int length,
                                  bool normalized) {
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(length);
  for (Eigen::Index k = 0; k < means.size(); ++k) {
    const double scale = mixture(k) * KernelScale(sigma(k), normalized);
    const double inv_two_var = 1.0 / (2.0 * sigma(k) * sigma(k));
    for (int j = 0; j < length; ++j) {
      const double d = j - means(k);
      out(j) += scale * std::exp(-d * d * inv_two_var);
    }
  }
  return out;
}

GmmStepResult GmmAttentionStep(const Eigen::RowVectorXd& raw,
                               GmmAttentionState* state, int memory_length,
                               const GmmAttentionConfig& config) {
  CheckStepArgs(raw.size(), memory_length, config);
  const int K = config.mixtures;
  if (state->means.size() != K) {
    throw std::invalid_argument("GMM attention: state has " +
                                std::to_string(state->means.size()) +
                                " means, expected " + std::to_string(K));
  }
  GmmStepResult r;
  r.delta = raw.head(K).unaryExpr([](double x) { return Softplus(x); });
  r.sigma = raw.segment(K, K).unaryExpr(
      [&](double x) { return Softplus(x) + config.sigma_min; });
  r.mixture = SoftmaxRows(Matrix(raw.tail(K)));
  state->means += r.delta;
  ++state->step;
  r.weights = MixtureWeights(state->means, r.sigma, r.mixture, memory_length,
                             config.normalized);
  return r;
}

namespace ad {

Var MixtureWeights(const Var& means, const Var& sigma, const Var& mixture,
                   int length, bool normalized) {
  const Eigen::Index K = means.cols();
  if (means.rows() != 1 || sigma.rows() != 1 || mixture.rows() != 1 ||
      sigma.cols() != K || mixture.cols() != K) {
    throw std::invalid_argument("MixtureWeights: expected three 1 x K rows");
  }
  Graph* g = means.graph();
  Matrix out = unifront::MixtureWeights(means.value(), sigma.value(),
                                        mixture.value(), length, normalized);
  return g->Record(
      std::move(out), {means, sigma, mixture},
      [g, means, sigma, mixture, length, normalized, K](const Matrix& dy,
                                                        const Matrix&) {
        Matrix d_mu = Matrix::Zero(1, K);
        Matrix d_sigma = Matrix::Zero(1, K);
        Matrix d_w = Matrix::Zero(1, K);
        for (Eigen::Index k = 0; k < K; ++k) {
          const double mu = means.value()(0, k);
          const double s = sigma.value()(0, k);
          const double w = mixture.value()(0, k);
          const double n = KernelScale(s, normalized);
          for (int j = 0; j < length; ++j) {
            const double d = j - mu;
            const double phi = std::exp(-d * d / (2.0 * s * s));
            const double gj = dy(0, j);
            d_w(0, k) += gj * n * phi;
            d_mu(0, k) += gj * w * n * phi * d / (s * s);
            double ds = w * n * phi * d * d / (s * s * s);
            if (normalized) ds -= w * n * phi / s;
            d_sigma(0, k) += gj * ds;
          }
        }
        g->Accumulate(means, d_mu);
        g->Accumulate(sigma, d_sigma);
        g->Accumulate(mixture, d_w);
      });
}

GmmStepVars GmmAttentionStep(const Var& raw, const Var& means,
                             int memory_length,
                             const GmmAttentionConfig& config) {
  CheckStepArgs(raw.cols(), memory_length, config);
  const int K = config.mixtures;
  Var delta = Softplus(SliceCols(raw, 0, K));
  Var sigma = AddScalar(Softplus(SliceCols(raw, K, K)), config.sigma_min);
  Var mixture = SoftmaxRows(SliceCols(raw, 2 * K, K));
  Var next = Add(means, delta);
  return {next, MixtureWeights(next, sigma, mixture, memory_length,
                               config.normalized)};
}

}  // namespace ad

}  // namespace unifront
