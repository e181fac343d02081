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

#include "unifront/loss.h"

#include <cmath>
#include <stdexcept>

namespace unifront {

namespace ad {

Var SoftmaxCrossEntropy(const Var& logits, const std::vector<int>& targets,
                        const std::vector<double>& weights, double smoothing) {
  const Eigen::Index T = logits.rows();
  const Eigen::Index V = logits.cols();
  if (static_cast<Eigen::Index>(targets.size()) != T ||
      static_cast<Eigen::Index>(weights.size()) != T) {
    throw std::invalid_argument(
        "SoftmaxCrossEntropy: logits have " + std::to_string(T) +
        " rows but targets/weights have " + std::to_string(targets.size()) +
        "/" + std::to_string(weights.size()));
  }
  if (smoothing < 0.0 || smoothing >= 1.0) {
    throw std::invalid_argument("label smoothing must be in [0, 1)");
  }
  Graph* g = logits.graph();
  const Matrix& z = logits.value();
  Matrix probs(T, V);
  double loss = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    if (weights[t] == 0.0) {
      probs.row(t).setZero();
      continue;
    }
    const int y = targets[t];
    if (y < 0 || y >= V) {
      throw std::out_of_range("SoftmaxCrossEntropy: target " +
                              std::to_string(y) + " outside [0, " +
                              std::to_string(V) + ")");
    }
    const double lse = LogSumExp(z.row(t).transpose());
    probs.row(t) = (z.row(t).array() - lse).exp();
    // -sum_c q_c log p_c with q = (1 - s) onehot + s / V
    double ce = (1.0 - smoothing) * (lse - z(t, y));
    if (smoothing > 0.0) ce += smoothing * (lse - z.row(t).mean());
    loss += weights[t] * ce;
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  return g->Record(std::move(out), {logits},
                   [g, logits, probs, targets, weights, smoothing, T, V](
                       const Matrix& dy, const Matrix&) {
                     Matrix dz = probs;
                     for (Eigen::Index t = 0; t < T; ++t) {
                       if (weights[t] == 0.0) continue;
                       dz.row(t).array() -= smoothing / static_cast<double>(V);
                       dz(t, targets[t]) -= 1.0 - smoothing;
                       dz.row(t) *= weights[t] * dy(0, 0);
                     }
                     g->Accumulate(logits, dz);
                   });
}

Var SigmoidCrossEntropy(const Var& logits, const std::vector<double>& targets,
                        const std::vector<double>& weights) {
  const Eigen::Index T = logits.rows();
  if (logits.cols() != 1 || static_cast<Eigen::Index>(targets.size()) != T ||
      static_cast<Eigen::Index>(weights.size()) != T) {
    throw std::invalid_argument("SigmoidCrossEntropy: expected T x 1 logits "
                                "with T targets and weights");
  }
  Graph* g = logits.graph();
  double loss = 0.0;
  Matrix dz = Matrix::Zero(T, 1);
  for (Eigen::Index t = 0; t < T; ++t) {
    if (weights[t] == 0.0) continue;
    const double x = logits.value()(t, 0);
    // log(1 + e^x) - y x, stable for both signs
    loss += weights[t] * (unifront::Softplus(x) - targets[t] * x);
    dz(t, 0) = weights[t] * (1.0 / (1.0 + std::exp(-x)) - targets[t]);
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  return g->Record(std::move(out), {logits},
                   [g, logits, dz](const Matrix& dy, const Matrix&) {
                     g->Accumulate(logits, dz * dy(0, 0));
                   });
}

}  // namespace ad

const std::array<const char*, 7>& LossBreakdown::TermNames() {
  static const std::array<const char*, 7> kNames = {
      "ce_phoneme_before", "ce_tone_before",  "ce_prosody_before", "ce_stop",
      "nll_phoneme_after", "nll_tone_after", "nll_prosody_after"};
  return kNames;
}

LossBreakdown CompositeLoss::Values() const {
  LossBreakdown b;
  b.ce_phoneme_before = terms[0].scalar();
  b.ce_tone_before = terms[1].scalar();
  b.ce_prosody_before = terms[2].scalar();
  b.ce_stop = terms[3].scalar();
  b.nll_phoneme_after = terms[4].scalar();
  b.nll_tone_after = terms[5].scalar();
  b.nll_prosody_after = terms[6].scalar();
  b.total = total.scalar();
  return b;
}

CompositeLoss ComputeCompositeLoss(const LabelLogits& before,
                                   const Var& stop_logits,
                                   const LabelLogits& after,
                                   const LabelTargets& targets,
                                   const std::vector<bool>& mask,
                                   double smoothing) {
  const size_t T = mask.size();
  auto check = [T](const char* what, size_t n) {
    if (n != T) {
      throw std::invalid_argument(std::string("composite loss: ") + what +
                                  " has length " + std::to_string(n) +
                                  ", mask has " + std::to_string(T));
    }
  };
  check("phoneme targets", targets.phonemes.size());
  check("tone targets", targets.tones.size());
  check("prosody targets", targets.prosody.size());
  for (const Var* v : {&before.phoneme, &before.tone, &before.prosody,
                       &after.phoneme, &after.tone, &after.prosody, &stop_logits}) {
    check("logit stream", static_cast<size_t>(v->rows()));
  }
  size_t active = 0;
  size_t last = 0;
  for (size_t t = 0; t < T; ++t) {
    if (mask[t]) {
      ++active;
      last = t;
    }
  }
  if (active == 0) throw std::invalid_argument("composite loss: all steps masked");
  std::vector<double> weights(T, 0.0);
  std::vector<double> stop_targets(T, 0.0);
  for (size_t t = 0; t < T; ++t) weights[t] = mask[t] ? 1.0 / active : 0.0;
  stop_targets[last] = 1.0;

  CompositeLoss loss;
  loss.terms[0] = ad::SoftmaxCrossEntropy(before.phoneme, targets.phonemes, weights, smoothing);
  loss.terms[1] = ad::SoftmaxCrossEntropy(before.tone, targets.tones, weights, smoothing);
  loss.terms[2] = ad::SoftmaxCrossEntropy(before.prosody, targets.prosody, weights, smoothing);
  loss.terms[3] = ad::SigmoidCrossEntropy(stop_logits, stop_targets, weights);
  loss.terms[4] = ad::SoftmaxCrossEntropy(after.phoneme, targets.phonemes, weights, 0.0);
  loss.terms[5] = ad::SoftmaxCrossEntropy(after.tone, targets.tones, weights, 0.0);
  loss.terms[6] = ad::SoftmaxCrossEntropy(after.prosody, targets.prosody, weights, 0.0);
  Var total = loss.terms[0];
  for (size_t i = 1; i < loss.terms.size(); ++i) total = ad::Add(total, loss.terms[i]);
  loss.total = total;
  return loss;
}

}  // namespace unifront
