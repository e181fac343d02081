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

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "tiny_model.h"
#include "unifront/optimizer.h"

namespace unifront {
namespace {

using testing::MakeTinySetup;
using testing::TinyConfig;

TEST(AdamTest, FirstStepsMatchHandComputation) {
  ParameterStore store;
  Parameter& p = store.Create("p", 1, 2, Init::kZeros, nullptr);
  p.value() << 1.0, -2.0;
  AdamConfig config;
  config.learning_rate = 0.1;
  config.clip_norm = 0.0;
  Adam adam({&p}, config);
  GradientMap grads;
  grads[&p] = (Matrix(1, 2) << 0.5, -0.25).finished();
  EXPECT_DOUBLE_EQ(adam.Step(grads), std::sqrt(0.25 + 0.0625));
  // Bias correction makes the first update lr * g / (|g| + eps).
  EXPECT_NEAR(p.value()(0, 0), 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(p.value()(0, 1), -2.0 + 0.1 * 0.25 / (0.25 + 1e-8), 1e-15);
  grads[&p] = (Matrix(1, 2) << 1.0, 0.0).finished();
  const double before = p.value()(0, 0);
  adam.Step(grads);
  const double m = (0.9 * 0.05 + 0.1 * 1.0) / (1 - 0.81);
  const double v = (0.999 * 0.001 * 0.25 + 0.001 * 1.0) / (1 - 0.999 * 0.999);
  EXPECT_NEAR(p.value()(0, 0), before - 0.1 * m / (std::sqrt(v) + 1e-8), 1e-14);
  EXPECT_EQ(adam.steps(), 2);
}

TEST(AdamTest, ClipsByGlobalNorm) {
  ParameterStore store;
  Parameter& a = store.Create("a", 1, 1, Init::kZeros, nullptr);
  Parameter& b = store.Create("b", 1, 1, Init::kZeros, nullptr);
  AdamConfig config;
  config.learning_rate = 1.0;
  config.beta1 = 0.0;
  config.beta2 = 0.0;
  config.epsilon = 0.0;
  config.clip_norm = 1.0;
  Adam adam({&a, &b}, config);
  GradientMap grads;
  grads[&a] = Matrix::Constant(1, 1, 3.0);
  grads[&b] = Matrix::Constant(1, 1, 4.0);
  EXPECT_DOUBLE_EQ(adam.Step(grads), 5.0);
  // With no moment memory the update is sign(g), unaffected by the scale.
  EXPECT_DOUBLE_EQ(a.value()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(b.value()(0, 0), -1.0);
}

TEST(MixSeedTest, DeterministicAndSpread) {
  EXPECT_EQ(MixSeed(1, 2), MixSeed(1, 2));
  EXPECT_NE(MixSeed(1, 2), MixSeed(2, 1));
  EXPECT_NE(MixSeed(0, 0), MixSeed(0, 1));
}

TrainConfig SmallTrain() {
  TrainConfig c;
  c.batch_size = 4;
  c.n_buckets = 2;
  c.upper_bound = 40;
  c.seed = 3;
  c.schedule.start_step = 2;
  c.schedule.decay_steps = 4;
  return c;
}

TEST(FinetunerTest, ResumeMatchesUninterruptedRun) {
  auto straight = MakeTinySetup(12, 41, TinyConfig());
  Finetuner a(straight.model.get(), straight.encoded, SmallTrain());
  std::vector<TraceRow> rows_a;
  for (int i = 0; i < 6; ++i) rows_a.push_back(a.Step());

  auto first = MakeTinySetup(12, 41, TinyConfig());
  Finetuner b(first.model.get(), first.encoded, SmallTrain());
  for (int i = 0; i < 3; ++i) b.Step();
  const std::string bytes = b.ToCheckpoint().Serialize();

  // Fresh model with a different initialization, restored from the bytes.
  auto resumed = MakeTinySetup(12, 41, TinyConfig());
  for (size_t i = 0; i < resumed.model->params().size(); ++i) {
    resumed.model->params().at(i).value().setConstant(0.5);
  }
  Finetuner c(resumed.model.get(), resumed.encoded, SmallTrain());
  c.Restore(Checkpoint::Deserialize(bytes));
  EXPECT_EQ(c.step(), 3);
  for (int i = 3; i < 6; ++i) {
    TraceRow row = c.Step();
    EXPECT_EQ(row.step, rows_a[i].step);
    EXPECT_EQ(row.ratio, rows_a[i].ratio);
    EXPECT_EQ(row.loss.total, rows_a[i].loss.total);
    EXPECT_EQ(row.grad_norm, rows_a[i].grad_norm);
  }
  EXPECT_EQ(resumed.model->ToCheckpoint().Serialize(), straight.model->ToCheckpoint().Serialize());
  EXPECT_LT(rows_a[4].ratio, 1.0);
}

TEST(FinetunerTest, RestoreRejectsOtherTrainerKind) {
  auto s = MakeTinySetup(8, 42, TinyConfig());
  AuxTrainer aux(s.model.get(), s.encoded, SmallTrain());
  aux.Step();
  Finetuner ft(s.model.get(), s.encoded, SmallTrain());
  EXPECT_THROW(ft.Restore(aux.ToCheckpoint()), std::runtime_error);
}

TEST(FinetunerTest, FrozenAuxStaysFixed) {
  auto s = MakeTinySetup(8, 43, TinyConfig());
  TrainConfig config = SmallTrain();
  config.aux_trainable = false;
  const Matrix aux_before = s.model->params().Find("aux.dcnn0.weight")->value();
  const Matrix main_before = s.model->params().Find("main.head.tone.weight")->value();
  Finetuner ft(s.model.get(), s.encoded, config);
  ft.Step();
  ft.Step();
  EXPECT_EQ(s.model->params().Find("aux.dcnn0.weight")->value(), aux_before);
  EXPECT_NE(s.model->params().Find("main.head.tone.weight")->value(), main_before);
}

TEST(AuxTrainerTest, UpdatesOnlyAuxParametersAndLearns) {
  auto s = MakeTinySetup(16, 44, TinyConfig());
  TrainConfig config = SmallTrain();
  config.adam.learning_rate = 1e-2;
  const Matrix main_before = s.model->params().Find("main.head.tone.weight")->value();
  const double initial = EvaluateAuxLoss(*s.model, s.encoded, 0.0);
  AuxTrainer trainer(s.model.get(), s.encoded, config);
  for (int i = 0; i < 40; ++i) trainer.Step();
  EXPECT_EQ(s.model->params().Find("main.head.tone.weight")->value(), main_before);
  EXPECT_LT(EvaluateAuxLoss(*s.model, s.encoded, 0.0), 0.7 * initial);
}

TEST(FinetunerTest, EpochCoversEveryPlacedUtterance) {
  auto s = MakeTinySetup(10, 45, TinyConfig());
  TrainConfig config = SmallTrain();
  config.batch_size = 3;
  Finetuner ft(s.model.get(), s.encoded, config);
  EXPECT_EQ(ft.dropped(), 0u);
  EXPECT_GE(ft.batches_per_epoch(), 4u);
  EXPECT_LE(ft.batches_per_epoch(), 5u);
}

TEST(EvaluateLossTest, IsLengthWeightedAndDeterministic) {
  auto s = MakeTinySetup(6, 46, TinyConfig());
  const LossBreakdown all = EvaluateLoss(*s.model, s.encoded, 0.1);
  EXPECT_EQ(EvaluateLoss(*s.model, s.encoded, 0.1).total, all.total);
  double weighted = 0.0;
  size_t total_len = 0;
  for (const auto& u : s.encoded) total_len += u.size();
  for (const auto& u : s.encoded) {
    weighted += EvaluateLoss(*s.model, {u}, 0.1).total * u.size() / static_cast<double>(total_len);
  }
  EXPECT_NEAR(all.total, weighted, 1e-12);
}

TEST(TraceCsvTest, WritesHeaderAndRows) {
  const auto path = std::filesystem::temp_directory_path() / "unifront_trace_test.csv";
  TraceRow row;
  row.step = 7;
  row.ratio = 0.5;
  row.loss.ce_stop = 0.25;
  row.loss.total = 1.5;
  row.grad_norm = 2.0;
  WriteTraceCsv(path.string(), {row});
  std::ifstream is(path);
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  EXPECT_EQ(header,
            "step,ratio,ce_phoneme_before,ce_tone_before,ce_prosody_before,ce_stop,"
            "nll_phoneme_after,nll_tone_after,nll_prosody_after,total,grad_norm");
  EXPECT_EQ(line.substr(0, 6), "7,0.5,");
  std::filesystem::remove(path);
}

TEST(TrainConfigTest, JsonRoundTripAndValidation) {
  TrainConfig c = SmallTrain();
  const auto j = c.ToJson();
  EXPECT_EQ(TrainConfig::FromJson(j).ToJson(), j);
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace unifront
