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


#ifndef UNIFRONT_OPTIMIZER_H_
#define UNIFRONT_OPTIMIZER_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "unifront/autodiff.h"
#include "unifront/checkpoint.h"

namespace unifront {

using GradientMap = std::unordered_map<const Parameter*, Matrix>;

// Adds scale * graph gradients into `into`.
void AccumulateGradients(const Graph& g, double scale, GradientMap* into);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 1.0;  // global L2 norm; <= 0 disables clipping
};

class Adam {
 public:
  Adam(std::vector<Parameter*> params, const AdamConfig& config);

  // Applies one update; parameters absent from `grads` get a zero gradient.
  // Returns the global gradient norm before clipping.
  double Step(const GradientMap& grads);

  int64_t steps() const { return steps_; }

  // Moments are stored as "adam.m/<param>" and "adam.v/<param>".
  void ExportState(Checkpoint* ckpt) const;
  void ImportState(const Checkpoint& ckpt);

 private:
  std::vector<Parameter*> params_;
  AdamConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  int64_t steps_ = 0;
};

}  // namespace unifront

#endif  // UNIFRONT_OPTIMIZER_H_
