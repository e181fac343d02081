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


#ifndef UNIFRONT_GMM_ATTENTION_H_
#define UNIFRONT_GMM_ATTENTION_H_

#include <Eigen/Dense>

#include "unifront/autodiff.h"

namespace unifront {

// Mixture-of-Gaussians location attention with softplus activations.
//
// Each step reads a raw 1 x 3K vector laid out [delta | sigma | weight]:
//   delta_k = softplus(raw_delta_k)            (> 0)
//   sigma_k = softplus(raw_sigma_k) + sigma_min
//   w       = softmax(raw_weight)
//   mu_k   += delta_k
//   alpha_j = sum_k w_k * n_k * exp(-(j - mu_k)^2 / (2 sigma_k^2))
// with n_k = 1 for the unnormalized kernel and 1 / (sigma_k sqrt(2 pi))
// otherwise. Means start at zero.
struct GmmAttentionConfig {
  int mixtures = 5;
  double sigma_min = 1e-4;
  bool normalized = false;
};

struct GmmAttentionState {
  Eigen::RowVectorXd means;
  int step = 0;

  static GmmAttentionState Initial(int mixtures) {
    return {Eigen::RowVectorXd::Zero(mixtures), 0};
  }
};

struct GmmStepResult {
  Eigen::RowVectorXd weights;  // 1 x memory_length
  Eigen::RowVectorXd delta;
  Eigen::RowVectorXd sigma;
  Eigen::RowVectorXd mixture;  // w
};

// Advances `state` in place. Throws std::invalid_argument when
// memory_length < 1 or raw has the wrong width.
GmmStepResult GmmAttentionStep(const Eigen::RowVectorXd& raw,
                               GmmAttentionState* state, int memory_length,
                               const GmmAttentionConfig& config);

// alpha_j for j in [0, length) given already-activated parameters.
Eigen::RowVectorXd MixtureWeights(const Eigen::RowVectorXd& means,
                                  const Eigen::RowVectorXd& sigma,
                                  const Eigen::RowVectorXd& mixture,
                                  int length, bool normalized);

namespace ad {

// Differentiable MixtureWeights; inputs are 1 x K rows.
Var MixtureWeights(const Var& means, const Var& sigma, const Var& mixture,
                   int length, bool normalized);

struct GmmStepVars {
  Var means;    // updated means, carried to the next step
  Var weights;  // 1 x memory_length
};

// Graph form of GmmAttentionStep: activates `raw` and advances `means`.
GmmStepVars GmmAttentionStep(const Var& raw, const Var& means,
                             int memory_length,
                             const GmmAttentionConfig& config);

}  // namespace ad

}  // namespace unifront

#endif  // UNIFRONT_GMM_ATTENTION_H_
