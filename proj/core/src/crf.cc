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

#include "unifront/crf.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace unifront {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckShapes(const Matrix& scores, const Matrix& transitions) {
  if (scores.rows() < 1) throw std::invalid_argument("CRF: empty sequence");
  if (transitions.rows() != scores.cols() ||
      transitions.cols() != scores.cols()) {
    throw std::invalid_argument("CRF: transitions must be " +
                                std::to_string(scores.cols()) + "x" +
                                std::to_string(scores.cols()));
  }
}

// exp(x - shift) that maps -inf to 0 without producing NaN.
inline double ExpShifted(double x, double shift) {
  return x == kNegInf ? 0.0 : std::exp(x - shift);
}

// alpha(t, j): log-sum of all prefixes ending in tag j at t.
Matrix ForwardScores(const Matrix& scores, const Matrix& transitions) {
  const Eigen::Index T = scores.rows();
  const Eigen::Index N = scores.cols();
  Matrix alpha(T, N);
  alpha.row(0) = scores.row(0);
  Eigen::VectorXd tmp(N);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index j = 0; j < N; ++j) {
      for (Eigen::Index i = 0; i < N; ++i) {
        tmp(i) = alpha(t - 1, i) + transitions(i, j);
      }
      alpha(t, j) = LogSumExp(tmp) + scores(t, j);
    }
  }
  return alpha;
}

// beta(t, i): log-sum of all suffixes after position t given tag i at t.
Matrix BackwardScores(const Matrix& scores, const Matrix& transitions) {
  const Eigen::Index T = scores.rows();
  const Eigen::Index N = scores.cols();
  Matrix beta(T, N);
  beta.row(T - 1).setZero();
  Eigen::VectorXd tmp(N);
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) {
        tmp(j) = transitions(i, j) + scores(t + 1, j) + beta(t + 1, j);
      }
      beta(t, i) = LogSumExp(tmp);
    }
  }
  return beta;
}

}  // namespace

double CrfLogPartition(const Matrix& scores, const Matrix& transitions) {
  CheckShapes(scores, transitions);
  Matrix alpha = ForwardScores(scores, transitions);
  return LogSumExp(alpha.row(alpha.rows() - 1).transpose());
}

double CrfPathScore(const Matrix& scores, const Matrix& transitions,
                    const std::vector<int>& tags) {
  CheckShapes(scores, transitions);
  if (static_cast<Eigen::Index>(tags.size()) != scores.rows()) {
    throw std::invalid_argument("CRF: tag sequence length " +
                                std::to_string(tags.size()) +
                                " differs from score length " +
                                std::to_string(scores.rows()));
  }
  for (int y : tags) {
    if (y < 0 || y >= scores.cols()) {
      throw std::out_of_range("CRF: tag index " + std::to_string(y) +
                              " outside [0, " + std::to_string(scores.cols()) +
                              ")");
    }
  }
  double s = scores(0, tags[0]);
  for (size_t t = 1; t < tags.size(); ++t) {
    s += transitions(tags[t - 1], tags[t]) + scores(t, tags[t]);
  }
  return s;
}

double CrfNll(const Matrix& scores, const Matrix& transitions,
              const std::vector<int>& gold, Matrix* grad_scores,
              Matrix* grad_transitions) {
  const double path = CrfPathScore(scores, transitions, gold);
  const Matrix alpha = ForwardScores(scores, transitions);
  const Eigen::Index T = scores.rows();
  const Eigen::Index N = scores.cols();
  const double log_z = LogSumExp(alpha.row(T - 1).transpose());
  if (grad_scores == nullptr && grad_transitions == nullptr) return log_z - path;

  const Matrix beta = BackwardScores(scores, transitions);
  if (grad_scores != nullptr) {
    // d/dscores = node marginals - gold indicator.
    grad_scores->resize(T, N);
    for (Eigen::Index t = 0; t < T; ++t) {
      for (Eigen::Index j = 0; j < N; ++j) {
        (*grad_scores)(t, j) = ExpShifted(alpha(t, j) + beta(t, j), log_z);
      }
      (*grad_scores)(t, gold[t]) -= 1.0;
    }
  }
  if (grad_transitions != nullptr) {
    // d/dtransitions = edge marginals - gold edge counts.
    grad_transitions->setZero(N, N);
    for (Eigen::Index t = 1; t < T; ++t) {
      for (Eigen::Index i = 0; i < N; ++i) {
        if (alpha(t - 1, i) == kNegInf) continue;
        for (Eigen::Index j = 0; j < N; ++j) {
          double e = alpha(t - 1, i) + transitions(i, j) + scores(t, j) + beta(t, j);
          (*grad_transitions)(i, j) += ExpShifted(e, log_z);
        }
      }
      (*grad_transitions)(gold[t - 1], gold[t]) -= 1.0;
    }
  }
  return log_z - path;
}

std::vector<int> CrfDecode(const Matrix& scores, const Matrix& transitions) {
  CheckShapes(scores, transitions);
  const Eigen::Index T = scores.rows();
  const Eigen::Index N = scores.cols();
  Eigen::VectorXd best = scores.row(0).transpose();
  Eigen::VectorXd next(N);
  std::vector<std::vector<int>> back(T, std::vector<int>(N, 0));
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index j = 0; j < N; ++j) {
      double top = kNegInf;
      int arg = 0;
      for (Eigen::Index i = 0; i < N; ++i) {
        double s = best(i) + transitions(i, j);
        if (s > top) {
          top = s;
          arg = static_cast<int>(i);
        }
      }
      next(j) = top + scores(t, j);
      back[t][j] = arg;
    }
    best.swap(next);
  }
  int last = 0;
  for (Eigen::Index j = 1; j < N; ++j) {
    if (best(j) > best(last)) last = static_cast<int>(j);
  }
  std::vector<int> path(T);
  path[T - 1] = last;
  for (Eigen::Index t = T - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
  return path;
}

namespace ad {

Var CrfNll(const Var& scores, const Var& transitions,
           const std::vector<int>& gold) {
  Graph* g = scores.graph();
  Matrix gs, gt;
  const bool need = g->RequiresGrad(scores) || g->RequiresGrad(transitions);
  Matrix out(1, 1);
  out(0, 0) = unifront::CrfNll(scores.value(), transitions.value(), gold,
                               need ? &gs : nullptr, need ? &gt : nullptr);
  return g->Record(std::move(out), {scores, transitions},
                   [g, scores, transitions, gs, gt](const Matrix& dy,
                                                    const Matrix&) {
                     g->Accumulate(scores, gs * dy(0, 0));
                     g->Accumulate(transitions, gt * dy(0, 0));
                   });
}

}  // namespace ad
}  // namespace unifront
