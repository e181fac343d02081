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


#include "unifront/inference.h"

#include <cmath>
#include <stdexcept>

#include <glog/logging.h>
#include <nlohmann/json.hpp>

#include "unifront/text_util.h"

namespace unifront {

namespace {

class FrontendSession : public DecodeSession {
 public:
  FrontendSession(const Frontend& model, const std::vector<int>& char_ids)
      : model_(model), graph_(/*record=*/false, /*training=*/false) {
    encoding_ = model_.Encode(graph_, char_ids);
    state_ = model_.main().InitialState(graph_);
  }

  StepScores Step(const LabelIds& prev) override {
    DecoderStepOutput out = model_.main().Step(graph_, prev, &state_, encoding_.encoder);
    return {out.phoneme.value(), out.tone.value(), out.prosody.value(),
            out.stop.scalar(), out.attention.value()};
  }

  LogitMatrices Refine(const LogitMatrices& before) override {
    LabelLogits refined = model_.main().Refine(
        graph_, {graph_.Constant(before.phoneme), graph_.Constant(before.tone),
                 graph_.Constant(before.prosody)});
    return {refined.phoneme.value(), refined.tone.value(), refined.prosody.value()};
  }

 private:
  const Frontend& model_;
  Graph graph_;
  Frontend::Encoding encoding_;
  DecoderState state_;
};

// Lexicon syllable id for monophone characters, or -1.
std::vector<int> SarPhonemes(const std::vector<std::string>& chars,
                             const Lexicon& lexicon, const VocabSet& vocab) {
  std::vector<int> out(chars.size(), -1);
  for (size_t i = 0; i < chars.size(); ++i) {
    const auto* prons = lexicon.Find(chars[i]);
    if (prons != nullptr && prons->size() == 1) {
      out[i] = vocab.phonemes.Id(prons->front().syllable);
    }
  }
  return out;
}

}  // namespace

const char* DecodeModeName(DecodeMode mode) { return mode == DecodeMode::kAr ? "ar" : "sar"; }

DecodeMode ParseDecodeMode(const std::string& s) {
  if (s == "ar") return DecodeMode::kAr;
  if (s == "sar") return DecodeMode::kSar;
  throw std::invalid_argument("unknown decode mode '" + s + "' (ar|sar)");
}

void DecodeOptions::Validate() const {
  if (max_steps < 0) throw std::invalid_argument("max_steps must be >= 1 (or 0 for default)");
  if (!(stop_threshold > 0.0 && stop_threshold < 1.0)) {
    throw std::invalid_argument("stop threshold must be in (0, 1)");
  }
}

std::unique_ptr<DecodeSession> FrontendDecoder::Begin(const std::vector<int>& char_ids) const {
  return std::make_unique<FrontendSession>(model_, char_ids);
}

bool StopDecision(double stop_logit, int step, int max_steps, double threshold) {
  if (step + 1 >= max_steps) return true;
  return 1.0 / (1.0 + std::exp(-stop_logit)) > threshold;
}

SequencePrediction DecodeUtterance(const DecoderModel& model,
                                   const std::vector<std::string>& chars,
                                   const Lexicon& lexicon,
                                   const DecodeOptions& options) {
  options.Validate();
  if (chars.empty()) throw std::invalid_argument("decode: empty input");
  const VocabSet& vocab = model.vocab();
  std::vector<int> ids;
  ids.reserve(chars.size());
  for (const auto& c : chars) ids.push_back(vocab.chars.Id(c));
  const int max_steps =
      options.max_steps > 0 ? options.max_steps : static_cast<int>(chars.size()) + 5;
  std::vector<int> forced;
  if (options.mode == DecodeMode::kSar) forced = SarPhonemes(chars, lexicon, vocab);
  auto forced_at = [&](int step) {
    return step < static_cast<int>(forced.size()) ? forced[step] : -1;
  };

  auto session = model.Begin(ids);
  SequencePrediction pred;
  std::vector<Eigen::RowVectorXd> ph, tn, pr;
  LabelIds prev;
  for (int step = 0;; ++step) {
    StepScores s = session->Step(prev);
    int phoneme = ArgmaxSymbol(s.phoneme);
    if (forced_at(step) >= 0) phoneme = forced_at(step);
    prev = {phoneme, ArgmaxSymbol(s.tone), ArgmaxSymbol(s.prosody)};
    pred.phonemes.push_back(prev.phoneme);
    pred.tones.push_back(prev.tone);
    pred.prosody.push_back(prev.prosody);
    pred.attention.push_back(s.attention);
    ph.push_back(s.phoneme);
    tn.push_back(s.tone);
    pr.push_back(s.prosody);
    const bool fired = options.use_stop &&
                       1.0 / (1.0 + std::exp(-s.stop)) > options.stop_threshold;
    if (fired || step + 1 >= max_steps) {
      pred.truncated = !fired && options.use_stop;
      break;
    }
  }
  pred.stop_step = static_cast<int>(pred.phonemes.size());

  if (options.apply_postnet) {
    auto stack = [](const std::vector<Eigen::RowVectorXd>& rows) {
      Matrix m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
      for (size_t t = 0; t < rows.size(); ++t) m.row(static_cast<Eigen::Index>(t)) = rows[t];
      return m;
    };
    LogitMatrices refined = session->Refine({stack(ph), stack(tn), stack(pr)});
    for (int t = 0; t < pred.stop_step; ++t) {
      pred.phonemes[t] = forced_at(t) >= 0 ? forced_at(t) : ArgmaxSymbol(refined.phoneme.row(t));
      pred.tones[t] = ArgmaxSymbol(refined.tone.row(t));
      pred.prosody[t] = ArgmaxSymbol(refined.prosody.row(t));
    }
  }
  return pred;
}

PredictionRecord ToRecord(const std::vector<std::string>& chars,
                          const SequencePrediction& pred, const VocabSet& vocab) {
  PredictionRecord r;
  r.chars = chars;
  r.truncated = pred.truncated;
  for (int t = 0; t < pred.stop_step; ++t) {
    r.phonemes.push_back(vocab.phonemes.Symbol(pred.phonemes[t]));
    r.tones.push_back(std::stoi(vocab.tones.Symbol(pred.tones[t])));
    r.prosody.push_back(std::stoi(vocab.prosody.Symbol(pred.prosody[t])));
    Eigen::Index peak;
    pred.attention[t].maxCoeff(&peak);
    r.attention_peaks.push_back(static_cast<int>(peak));
  }
  return r;
}

std::string FormatPredictionRecord(const PredictionRecord& record) {
  auto join_ints = [](const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i > 0) s += ' ';
      s += std::to_string(v[i]);
    }
    return s;
  };
  std::string syl;
  for (size_t i = 0; i < record.phonemes.size(); ++i) {
    if (i > 0) syl += ' ';
    syl += record.phonemes[i];
  }
  nlohmann::ordered_json j;
  j["text"] = JoinChars(record.chars);
  j["syl"] = syl;
  j["tone"] = join_ints(record.tones);
  j["pros"] = join_ints(record.prosody);
  j["truncated"] = record.truncated;
  j["attention_peaks"] = record.attention_peaks;
  return j.dump();
}

BatchPredictResult BatchPredict(const DecoderModel& model,
                                const std::vector<std::vector<std::string>>& inputs,
                                const Lexicon& lexicon, const DecodeOptions& options) {
  BatchPredictResult result;
  for (size_t i = 0; i < inputs.size(); ++i) {
    try {
      SequencePrediction pred = DecodeUtterance(model, inputs[i], lexicon, options);
      result.records.push_back(ToRecord(inputs[i], pred, model.vocab()));
    } catch (const std::exception& e) {
      LOG(ERROR) << "record " << i + 1 << ": " << e.what();
      ++result.failures;
    }
  }
  return result;
}

}  // namespace unifront
