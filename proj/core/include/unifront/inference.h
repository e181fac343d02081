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


#ifndef UNIFRONT_INFERENCE_H_
#define UNIFRONT_INFERENCE_H_

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "unifront/corpus.h"
#include "unifront/frontend.h"
#include "unifront/lexicon.h"
#include "unifront/main_model.h"
#include "unifront/vocab.h"

namespace unifront {

enum class DecodeMode { kAr, kSar };

const char* DecodeModeName(DecodeMode mode);
DecodeMode ParseDecodeMode(const std::string& s);

struct DecodeOptions {
  DecodeMode mode = DecodeMode::kAr;
  int max_steps = 0;  // 0 means input length + 5
  double stop_threshold = 0.5;
  bool apply_postnet = true;
  bool use_stop = true;  // false decodes exactly max_steps steps

  void Validate() const;
};

// Scores produced by one decoder step.
struct StepScores {
  Eigen::RowVectorXd phoneme;
  Eigen::RowVectorXd tone;
  Eigen::RowVectorXd prosody;
  double stop = 0.0;
  Eigen::RowVectorXd attention;
};

struct LogitMatrices {
  Matrix phoneme;
  Matrix tone;
  Matrix prosody;
};

// A running decode over one utterance.
class DecodeSession {
 public:
  virtual ~DecodeSession() = default;
  virtual StepScores Step(const LabelIds& prev) = 0;
  // Post-net refinement over the stacked per-step logits.
  virtual LogitMatrices Refine(const LogitMatrices& before) = 0;
};

// Anything that can start a decode: the trained front-end, or test doubles.
class DecoderModel {
 public:
  virtual ~DecoderModel() = default;
  virtual const VocabSet& vocab() const = 0;
  virtual std::unique_ptr<DecodeSession> Begin(const std::vector<int>& char_ids) const = 0;
};

// Eval-mode adapter over a Frontend. The model must outlive it.
class FrontendDecoder : public DecoderModel {
 public:
  explicit FrontendDecoder(const Frontend& model) : model_(model) {}
  const VocabSet& vocab() const override { return model_.vocab(); }
  std::unique_ptr<DecodeSession> Begin(const std::vector<int>& char_ids) const override;

 private:
  const Frontend& model_;
};

struct SequencePrediction {
  std::vector<int> phonemes;  // vocab ids
  std::vector<int> tones;
  std::vector<int> prosody;
  int stop_step = 0;          // number of decoded steps
  bool truncated = false;     // max_steps reached without a stop
  std::vector<Eigen::RowVectorXd> attention;
};

// True iff sigmoid(stop_logit) > threshold or step + 1 == max_steps.
bool StopDecision(double stop_logit, int step, int max_steps, double threshold);

// Greedy decoding. In SAR mode, every position i < chars.size() whose
// character is a lexicon monophone has its phoneme, both emitted and fed to
// step i + 1, replaced by the lexicon syllable. Throws std::invalid_argument
// for empty input.
SequencePrediction DecodeUtterance(const DecoderModel& model,
                                   const std::vector<std::string>& chars,
                                   const Lexicon& lexicon,
                                   const DecodeOptions& options);

struct PredictionRecord {
  std::vector<std::string> chars;
  std::vector<std::string> phonemes;
  std::vector<int> tones;    // 1..5
  std::vector<int> prosody;  // 0..3
  bool truncated = false;
  std::vector<int> attention_peaks;  // argmax input position per step
};

PredictionRecord ToRecord(const std::vector<std::string>& chars,
                          const SequencePrediction& pred, const VocabSet& vocab);
std::string FormatPredictionRecord(const PredictionRecord& record);

struct BatchPredictResult {
  std::vector<PredictionRecord> records;  // successful records, input order
  size_t failures = 0;
};

// Decodes every utterance; failures are logged and skipped.
BatchPredictResult BatchPredict(const DecoderModel& model,
                                const std::vector<std::vector<std::string>>& inputs,
                                const Lexicon& lexicon, const DecodeOptions& options);

}  // namespace unifront

#endif  // UNIFRONT_INFERENCE_H_
