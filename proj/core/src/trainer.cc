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


#include "unifront/trainer.h"

#include <fstream>
#include <stdexcept>

#include <glog/logging.h>

#include "unifront/text_util.h"

namespace unifront {

namespace {

bool FinetuneTrainable(const std::string& name, const TrainConfig& config) {
  return config.aux_trainable || !name.starts_with("aux.");
}

bool AuxTrainable(const std::string& name, const TrainConfig&) {
  return name.starts_with("aux.");
}

size_t TotalLength(const std::vector<EncodedUtterance>& corpus,
                   const std::vector<size_t>& batch) {
  size_t n = 0;
  for (size_t i : batch) n += corpus[i].size();
  return n;
}

}  // namespace

void TrainConfig::Validate() const {
  if (steps < 0) throw std::invalid_argument("train: steps must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (n_buckets < 1 || upper_bound < n_buckets) {
    throw std::invalid_argument("train: need n_buckets >= 1 and upper_bound >= n_buckets");
  }
  if (smoothing < 0.0 || smoothing >= 1.0) {
    throw std::invalid_argument("train: smoothing must be in [0, 1)");
  }
  if (!(adam.learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
  schedule.Validate();
}

nlohmann::json TrainConfig::ToJson() const {
  return {{"steps", steps},
          {"batch_size", batch_size},
          {"n_buckets", n_buckets},
          {"upper_bound", upper_bound},
          {"smoothing", smoothing},
          {"schedule_start", schedule.start_step},
          {"schedule_decay", schedule.decay_steps},
          {"learning_rate", adam.learning_rate},
          {"beta1", adam.beta1},
          {"beta2", adam.beta2},
          {"epsilon", adam.epsilon},
          {"clip_norm", adam.clip_norm},
          {"aux_trainable", aux_trainable},
          {"sar_training", sar_training},
          {"seed", seed}};
}

TrainConfig TrainConfig::FromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.steps = j.at("steps").get<int64_t>();
  c.batch_size = j.at("batch_size").get<int>();
  c.n_buckets = j.at("n_buckets").get<int>();
  c.upper_bound = j.at("upper_bound").get<int>();
  c.smoothing = j.at("smoothing").get<double>();
  c.schedule.start_step = j.at("schedule_start").get<int64_t>();
  c.schedule.decay_steps = j.at("schedule_decay").get<int64_t>();
  c.adam.learning_rate = j.at("learning_rate").get<double>();
  c.adam.beta1 = j.at("beta1").get<double>();
  c.adam.beta2 = j.at("beta2").get<double>();
  c.adam.epsilon = j.at("epsilon").get<double>();
  c.adam.clip_norm = j.at("clip_norm").get<double>();
  c.aux_trainable = j.at("aux_trainable").get<bool>();
  c.sar_training = j.at("sar_training").get<bool>();
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CompositeLoss UtteranceLoss(const Frontend& model, Graph& g,
                            const EncodedUtterance& utt, double ratio,
                            double smoothing, bool sar_training,
                            std::mt19937_64* rng) {
  Frontend::Encoding enc = model.Encode(g, utt.chars);
  TeacherForcedOutput out = model.main().ForwardTeacherForced(
      g, enc.encoder, utt, ratio, rng, sar_training ? &utt.polyphone_mask : nullptr);
  std::vector<bool> mask(utt.size(), true);
  return ComputeCompositeLoss(out.before, out.stop, out.after,
                              {utt.phonemes, utt.tones, utt.prosody}, mask, smoothing);
}

LossBreakdown EvaluateLoss(const Frontend& model,
                           const std::vector<EncodedUtterance>& corpus,
                           double smoothing) {
  if (corpus.empty()) throw std::invalid_argument("EvaluateLoss: empty corpus");
  size_t total = 0;
  for (const auto& u : corpus) total += u.size();
  std::array<double, 7> sums{};
  std::mt19937_64 rng(0);
  for (const auto& u : corpus) {
    Graph g(/*record=*/false, /*training=*/false);
    LossBreakdown b = UtteranceLoss(model, g, u, 1.0, smoothing, false, &rng).Values();
    const double w = static_cast<double>(u.size()) / static_cast<double>(total);
    auto terms = b.terms();
    for (size_t i = 0; i < sums.size(); ++i) sums[i] += w * terms[i];
  }
  LossBreakdown out;
  out.ce_phoneme_before = sums[0];
  out.ce_tone_before = sums[1];
  out.ce_prosody_before = sums[2];
  out.ce_stop = sums[3];
  out.nll_phoneme_after = sums[4];
  out.nll_tone_after = sums[5];
  out.nll_prosody_after = sums[6];
  for (double s : sums) out.total += s;
  return out;
}

TrainerBase::TrainerBase(Frontend* model, std::vector<EncodedUtterance> corpus,
                         const TrainConfig& config, const std::string& kind,
                         bool (*trainable)(const std::string&, const TrainConfig&))
    : model_(model), corpus_(std::move(corpus)), config_(config), kind_(kind) {
  config_.Validate();
  if (corpus_.empty()) throw std::invalid_argument(kind_ + ": empty training corpus");
  std::vector<Parameter*> params;
  for (size_t i = 0; i < model_->params().size(); ++i) {
    Parameter& p = model_->params().at(i);
    if (trainable(p.name(), config_)) params.push_back(&p);
  }
  if (params.empty()) throw std::invalid_argument(kind_ + ": no trainable parameters");
  adam_ = std::make_unique<Adam>(std::move(params), config_.adam);
  for (const auto& u : corpus_) lengths_.push_back(static_cast<int>(u.size()));
  BucketPlan plan = BucketBatches(lengths_, config_.n_buckets, config_.upper_bound,
                                  config_.batch_size, MixSeed(config_.seed, 0));
  batches_per_epoch_ = plan.batches.size();
  dropped_ = plan.dropped;
  if (dropped_ > 0) {
    LOG(WARNING) << kind_ << ": " << dropped_ << " utterances exceed the bucket bound "
                 << config_.upper_bound << " and are skipped";
  }
  if (batches_per_epoch_ == 0) {
    throw std::invalid_argument(kind_ + ": no utterance fits the bucket bound");
  }
}

const Batch& TrainerBase::BatchFor(int64_t step) {
  const int64_t epoch = step / static_cast<int64_t>(batches_per_epoch_);
  if (epoch != cached_epoch_) {
    cached_plan_ = BucketBatches(lengths_, config_.n_buckets, config_.upper_bound,
                                 config_.batch_size,
                                 MixSeed(config_.seed, static_cast<uint64_t>(epoch)));
    cached_epoch_ = epoch;
  }
  return cached_plan_.batches[step % static_cast<int64_t>(batches_per_epoch_)];
}

TraceRow TrainerBase::Step() {
  TraceRow row;
  row.step = step_;
  GradientMap grads;
  Accumulate(BatchFor(step_).members, step_, &grads, &row);
  row.grad_norm = adam_->Step(grads);
  ++step_;
  return row;
}

Checkpoint TrainerBase::ToCheckpoint() const {
  Checkpoint ckpt = model_->ToCheckpoint();
  ckpt.header["trainer"] = kind_;
  ckpt.header["train_step"] = step_;
  ckpt.header["train_config"] = config_.ToJson();
  adam_->ExportState(&ckpt);
  return ckpt;
}

void TrainerBase::Restore(const Checkpoint& ckpt) {
  if (!ckpt.header.contains("train_step") || ckpt.header.value("trainer", "") != kind_) {
    throw std::runtime_error("checkpoint holds no " + kind_ + " state to resume from");
  }
  if (!(FrontendConfig::FromJson(ckpt.header.at("config")) == model_->config())) {
    throw std::runtime_error("checkpoint architecture does not match the model config");
  }
  ckpt.RestoreParameters(&model_->params());
  adam_->ImportState(ckpt);
  step_ = ckpt.header.at("train_step").get<int64_t>();
}

Finetuner::Finetuner(Frontend* model, std::vector<EncodedUtterance> corpus,
                     const TrainConfig& config)
    : TrainerBase(model, std::move(corpus), config, "finetune", &FinetuneTrainable) {}

void Finetuner::Accumulate(const std::vector<size_t>& batch, int64_t step,
                           GradientMap* grads, TraceRow* row) {
  row->ratio = TeacherForcingRatio(step, config_.schedule);
  const double total = static_cast<double>(TotalLength(corpus_, batch));
  std::array<double, 7> sums{};
  const uint64_t step_seed = MixSeed(config_.seed, 0x5eedULL + static_cast<uint64_t>(step));
  for (size_t k = 0; k < batch.size(); ++k) {
    const EncodedUtterance& utt = corpus_[batch[k]];
    const uint64_t seed = MixSeed(step_seed, k);
    Graph g(/*record=*/true, /*training=*/true, seed);
    std::mt19937_64 rng(MixSeed(seed, 1));
    CompositeLoss loss =
        UtteranceLoss(*model_, g, utt, row->ratio, config_.smoothing, config_.sar_training, &rng);
    const double w = static_cast<double>(utt.size()) / total;
    g.Backward(ad::Scale(loss.total, w));
    AccumulateGradients(g, 1.0, grads);
    auto terms = loss.Values().terms();
    for (size_t i = 0; i < sums.size(); ++i) sums[i] += w * terms[i];
  }
  row->loss.ce_phoneme_before = sums[0];
  row->loss.ce_tone_before = sums[1];
  row->loss.ce_prosody_before = sums[2];
  row->loss.ce_stop = sums[3];
  row->loss.nll_phoneme_after = sums[4];
  row->loss.nll_tone_after = sums[5];
  row->loss.nll_prosody_after = sums[6];
  row->loss.total = 0.0;
  for (double s : sums) row->loss.total += s;
}

AuxTrainer::AuxTrainer(Frontend* model, std::vector<EncodedUtterance> corpus,
                       const TrainConfig& config)
    : TrainerBase(model, std::move(corpus), config, "train-aux", &AuxTrainable) {
  if (!model->has_aux()) throw std::invalid_argument("train-aux: model has no auxiliary module");
}

void AuxTrainer::Accumulate(const std::vector<size_t>& batch, int64_t step,
                            GradientMap* grads, TraceRow* row) {
  const double total = static_cast<double>(TotalLength(corpus_, batch));
  const uint64_t step_seed = MixSeed(config_.seed, 0xa0eULL + static_cast<uint64_t>(step));
  double loss_sum = 0.0;
  for (size_t k = 0; k < batch.size(); ++k) {
    const EncodedUtterance& utt = corpus_[batch[k]];
    Graph g(/*record=*/true, /*training=*/true, MixSeed(step_seed, k));
    AuxOutput out = model_->aux().Forward(g, model_->Embed(g, utt.chars));
    Var loss = ad::Scale(model_->aux().Loss(out, utt, config_.smoothing), 1.0 / total);
    g.Backward(loss);
    AccumulateGradients(g, 1.0, grads);
    loss_sum += loss.scalar();
  }
  row->ratio = 1.0;
  row->loss.total = loss_sum;
}

double EvaluateAuxLoss(const Frontend& model,
                       const std::vector<EncodedUtterance>& corpus,
                       double smoothing) {
  if (!model.has_aux()) throw std::invalid_argument("model has no auxiliary module");
  double sum = 0.0;
  size_t n = 0;
  for (const auto& u : corpus) {
    Graph g(false, false);
    AuxOutput out = model.aux().Forward(g, model.Embed(g, u.chars));
    sum += model.aux().Loss(out, u, smoothing).scalar();
    n += u.size();
  }
  if (n == 0) throw std::invalid_argument("EvaluateAuxLoss: empty corpus");
  return sum / static_cast<double>(n);
}

void WriteTraceCsv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,ratio";
  for (const char* name : LossBreakdown::TermNames()) out << ',' << name;
  out << ",total,grad_norm\n";
  for (const TraceRow& r : rows) {
    out << r.step << ',' << FormatDouble(r.ratio);
    for (double v : r.loss.terms()) out << ',' << FormatDouble(v);
    out << ',' << FormatDouble(r.loss.total) << ',' << FormatDouble(r.grad_norm) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace unifront
