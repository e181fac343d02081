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


#ifndef UNIFRONT_METRICS_H_
#define UNIFRONT_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "unifront/corpus.h"
#include "unifront/frontend.h"
#include "unifront/inference.h"
#include "unifront/lexicon.h"

namespace unifront {

// Counts behind one F1 score. F1 = 2 tp / (predicted + gold); undefined when
// both counts are zero, 0 when there is no overlap.
struct F1Counts {
  int64_t tp = 0;
  int64_t predicted = 0;
  int64_t gold = 0;

  std::optional<double> Precision() const;
  std::optional<double> Recall() const;
  std::optional<double> F1() const;
  F1Counts& operator+=(const F1Counts& o);
  bool operator==(const F1Counts&) const = default;
};

struct AccuracyCounts {
  int64_t correct = 0;
  int64_t total = 0;

  // Undefined (not 0) when total == 0.
  std::optional<double> Value() const;
  AccuracyCounts& operator+=(const AccuracyCounts& o);
  bool operator==(const AccuracyCounts&) const = default;
};

// Repairs a malformed BMES sequence: an M or E that does not continue an
// open word becomes B or S respectively; a word left open before an S or B
// or at the end is closed by rewriting its last tag (B -> S, M -> E).
std::vector<CwsTag> CanonicalizeBmes(std::span<const CwsTag> tags);

// Word spans [start, end] (inclusive) of a canonicalized BMES sequence.
std::vector<std::pair<int, int>> ExtractSpans(std::span<const CwsTag> tags);

// Exact span matching after canonicalization. Throws on length mismatch.
F1Counts BlockF1(std::span<const CwsTag> gold, std::span<const CwsTag> pred);

// Accuracy over positions where mask is true. pred may be shorter than gold;
// missing positions count as errors.
AccuracyCounts G2pAccuracy(std::span<const int> gold, std::span<const int> pred,
                           const std::vector<bool>& mask);

struct ProsodyCounts {
  F1Counts pw, pp, ip;
  ProsodyCounts& operator+=(const ProsodyCounts& o);
};

// Position t is a level-L positive iff its label >= L. pred may be shorter
// than gold; missing positions count as label 0.
ProsodyCounts StackedProsodyF1(std::span<const int> gold, std::span<const int> pred);

AccuracyCounts TaggingAccuracy(std::span<const int> gold, std::span<const int> pred);

struct MetricsReport {
  F1Counts cws;
  AccuracyCounts pos;
  AccuracyCounts g2p;
  ProsodyCounts prosody;
  int64_t utterances = 0;
  int64_t truncated = 0;

  MetricsReport& operator+=(const MetricsReport& o);
  // Metric values are null when undefined; counts are included.
  nlohmann::ordered_json ToJson() const;
};

// Rows of labelled reports as an aligned text table with columns
// G2P, PW, PP, IP, CWS, POS.
std::string FormatMetricsTable(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);

// Scores one prediction against its gold utterance (raw symbols).
MetricsReport ScoreUtterance(const Utterance& gold, const PredictionRecord& pred);

// Decodes and scores every utterance; aux tagging metrics are added when the
// model has an auxiliary module. Throws std::invalid_argument on an empty
// corpus.
MetricsReport EvaluateRun(const Frontend& model, const std::vector<Utterance>& corpus,
                          const Lexicon& lexicon, const DecodeOptions& options);

// Same, for any decoder model; no tagging metrics.
MetricsReport EvaluateDecoder(const DecoderModel& model,
                              const std::vector<Utterance>& corpus,
                              const Lexicon& lexicon, const DecodeOptions& options);

}  // namespace unifront

#endif  // UNIFRONT_METRICS_H_
