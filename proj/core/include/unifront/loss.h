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

#ifndef UNIFRONT_LOSS_H_
#define UNIFRONT_LOSS_H_

#include <array>
#include <string>
#include <vector>

#include "unifront/autodiff.h"

namespace unifront {

namespace ad {

// sum_t w_t * CE(softmax(logits_t), q_t) where q_t puts 1 - smoothing on the
// target and smoothing / V on every class. Rows with w_t == 0 contribute
// nothing, so padded tails are free.
Var SoftmaxCrossEntropy(const Var& logits, const std::vector<int>& targets,
                        const std::vector<double>& weights, double smoothing);

// sum_t w_t * BCE(sigmoid(logits_t), y_t) for a T x 1 logit column.
Var SigmoidCrossEntropy(const Var& logits, const std::vector<double>& targets,
                        const std::vector<double>& weights);

}  // namespace ad

// The seven terms of the joint objective. Categorical terms are means over
// unmasked steps; `total` is their sum, accumulated in declaration order.
struct LossBreakdown {
  double ce_phoneme_before = 0.0;
  double ce_tone_before = 0.0;
  double ce_prosody_before = 0.0;
  double ce_stop = 0.0;
  double nll_phoneme_after = 0.0;
  double nll_tone_after = 0.0;
  double nll_prosody_after = 0.0;
  double total = 0.0;

  std::array<double, 7> terms() const {
    return {ce_phoneme_before, ce_tone_before,    ce_prosody_before, ce_stop,
            nll_phoneme_after, nll_tone_after, nll_prosody_after};
  }
  static const std::array<const char*, 7>& TermNames();
};

// Logit streams over the three label families, each T x V.
struct LabelLogits {
  Var phoneme;
  Var tone;
  Var prosody;
};

struct LabelTargets {
  std::vector<int> phonemes;
  std::vector<int> tones;
  std::vector<int> prosody;
};

struct CompositeLoss {
  std::array<Var, 7> terms;
  Var total;
  LossBreakdown Values() const;
};

// Joint objective: label-smoothed cross-entropy on the pre-post-net
// streams, binary cross-entropy on the stop logits (positive only at the
// last unmasked step), and unsmoothed negative log-likelihood on the
// post-net streams. mask[t] == false marks padding. Throws
// std::invalid_argument on any length mismatch.
CompositeLoss ComputeCompositeLoss(const LabelLogits& before,
                                   const Var& stop_logits,
                                   const LabelLogits& after,
                                   const LabelTargets& targets,
                                   const std::vector<bool>& mask,
                                   double smoothing);

}  // namespace unifront

#endif  // UNIFRONT_LOSS_H_
