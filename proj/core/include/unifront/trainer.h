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


#ifndef UNIFRONT_TRAINER_H_
#define UNIFRONT_TRAINER_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unifront/bucketing.h"
#include "unifront/checkpoint.h"
#include "unifront/corpus.h"
#include "unifront/frontend.h"
#include "unifront/loss.h"
#include "unifront/optimizer.h"
#include "unifront/schedule.h"

namespace unifront {

struct TrainConfig {
  int64_t steps = 1000;
  int batch_size = 32;
  int n_buckets = 13;
  int upper_bound = 90;
  double smoothing = 0.1;
  Schedule schedule;
  AdamConfig adam;
  bool aux_trainable = true;  // fine-tuning only
  bool sar_training = false;  // feed gold phonemes after monophones
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& j);
};

struct TraceRow {
  int64_t step = 0;  // number of updates before this one
  double ratio = 1.0;
  LossBreakdown loss;  // aux training fills only `total`
  double grad_norm = 0.0;
};

// splitmix64 finalizer over the pair; used to derive per-step seeds so
// that any step can be replayed without carrying RNG state.
uint64_t MixSeed(uint64_t a, uint64_t b);

// Recording-graph composite loss for one utterance.
CompositeLoss UtteranceLoss(const Frontend& model, Graph& g,
                            const EncodedUtterance& utt, double ratio,
                            double smoothing, bool sar_training,
                            std::mt19937_64* rng);

// Eval-mode loss averaged over all steps of `corpus`: no dropout, teacher
// forcing ratio 1.
LossBreakdown EvaluateLoss(const Frontend& model,
                           const std::vector<EncodedUtterance>& corpus,
                           double smoothing);

// Shared batching and optimizer plumbing. Batches are bucketed by length;
// epoch e is shuffled with MixSeed(seed, e), so step s maps to a fixed
// batch and a restart only needs the step counter and optimizer moments.
class TrainerBase {
 public:
  virtual ~TrainerBase() = default;

  TraceRow Step();
  int64_t step() const { return step_; }
  size_t batches_per_epoch() const { return batches_per_epoch_; }
  size_t dropped() const { return dropped_; }
  const TrainConfig& config() const { return config_; }

  // Model, optimizer moments and step counter.
  Checkpoint ToCheckpoint() const;
  // Restores everything written by ToCheckpoint(). Throws on architecture
  // mismatch.
  void Restore(const Checkpoint& ckpt);

 protected:
  TrainerBase(Frontend* model, std::vector<EncodedUtterance> corpus,
              const TrainConfig& config, const std::string& kind,
              bool (*trainable)(const std::string& name, const TrainConfig&));

  // Adds batch-weighted gradients into `grads` and fills `row`.
  virtual void Accumulate(const std::vector<size_t>& batch, int64_t step,
                          GradientMap* grads, TraceRow* row) = 0;

  Frontend* model_;
  std::vector<EncodedUtterance> corpus_;
  TrainConfig config_;

 private:
  const Batch& BatchFor(int64_t step);

  std::string kind_;
  std::unique_ptr<Adam> adam_;
  std::vector<int> lengths_;
  size_t batches_per_epoch_ = 0;
  size_t dropped_ = 0;
  int64_t cached_epoch_ = -1;
  BucketPlan cached_plan_;
  int64_t step_ = 0;
};

// Joint fine-tuning with scheduled sampling.
class Finetuner : public TrainerBase {
 public:
  Finetuner(Frontend* model, std::vector<EncodedUtterance> corpus,
            const TrainConfig& config);

 protected:
  void Accumulate(const std::vector<size_t>& batch, int64_t step,
                  GradientMap* grads, TraceRow* row) override;
};

// Auxiliary pre-training; only "aux." parameters change.
class AuxTrainer : public TrainerBase {
 public:
  AuxTrainer(Frontend* model, std::vector<EncodedUtterance> corpus,
             const TrainConfig& config);

 protected:
  void Accumulate(const std::vector<size_t>& batch, int64_t step,
                  GradientMap* grads, TraceRow* row) override;
};

// Eval-mode auxiliary loss per position.
double EvaluateAuxLoss(const Frontend& model,
                       const std::vector<EncodedUtterance>& corpus,
                       double smoothing);

// CSV with a header row: step, ratio, the seven loss terms, total,
// grad_norm.
void WriteTraceCsv(const std::string& path, const std::vector<TraceRow>& rows);

}  // namespace unifront

#endif  // UNIFRONT_TRAINER_H_
