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

#ifndef UNIFRONT_CRF_H_
#define UNIFRONT_CRF_H_

#include <vector>

#include "unifront/autodiff.h"

namespace unifront {

// Linear-chain CRF over T x N emission scores and an N x N transition
// matrix, transitions(i, j) scoring tag i followed by tag j. A path scores
// sum_t scores(t, y_t) + sum_t transitions(y_{t-1}, y_t). Transition
// entries may be -infinity to forbid moves.

// log sum over all paths of exp(path score), via the forward algorithm.
double CrfLogPartition(const Matrix& scores, const Matrix& transitions);

double CrfPathScore(const Matrix& scores, const Matrix& transitions,
                    const std::vector<int>& tags);

// -log p(gold | scores). Fills the gradients w.r.t. scores and transitions
// when the pointers are non-null. Throws std::out_of_range for tags outside
// [0, N) and std::invalid_argument for shape mismatches.
double CrfNll(const Matrix& scores, const Matrix& transitions,
              const std::vector<int>& gold, Matrix* grad_scores = nullptr,
              Matrix* grad_transitions = nullptr);

// Viterbi argmax path; equal scores resolve toward the lower tag index.
std::vector<int> CrfDecode(const Matrix& scores, const Matrix& transitions);

namespace ad {
Var CrfNll(const Var& scores, const Var& transitions,
           const std::vector<int>& gold);
}  // namespace ad

}  // namespace unifront

#endif  // UNIFRONT_CRF_H_
