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


#ifndef UNIFRONT_AUX_MODEL_H_
#define UNIFRONT_AUX_MODEL_H_

#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unifront/autodiff.h"
#include "unifront/corpus.h"
#include "unifront/layers.h"

namespace unifront {

enum class AuxVariant { kDcnn, kTe };
enum class TagHead { kCrf, kSoftmax };

struct AuxConfig {
  AuxVariant variant = AuxVariant::kDcnn;
  bool cws = true;
  bool pos = true;

  int dcnn_layers = 3;
  int dcnn_kernel = 5;
  int dcnn_filters = 128;
  std::vector<int> dcnn_dilations = {1, 2, 4};

  int te_lstm_units = 256;
  int te_attn_blocks = 1;
  int te_heads = 8;
  bool te_positional = true;
  int te_max_positions = 200;  // later positions reuse the last row

  TagHead cws_head = TagHead::kCrf;
  TagHead pos_head = TagHead::kSoftmax;
  double dropout = 0.1;

  // Width of the dense representation handed to the main model.
  int DenseWidth() const;
  // Throws std::invalid_argument on inconsistent settings.
  void Validate() const;

  nlohmann::json ToJson() const;
  static AuxConfig FromJson(const nlohmann::json& j);
  bool operator==(const AuxConfig&) const = default;
};

struct AuxOutput {
  Var dense;       // T x DenseWidth()
  Var cws_scores;  // T x 4, invalid when CWS is off
  Var pos_scores;  // T x pos classes, invalid when POS is off
};

struct AuxTags {
  std::vector<int> cws;  // raw BMES indices
  std::vector<int> pos;  // POS vocab ids
};

// CWS/POS feature extractor. Parameters are registered in `store` under
// "aux.".
class AuxModel {
 public:
  AuxModel(ParameterStore* store, const AuxConfig& config, int input_dim,
           int pos_classes, std::mt19937_64* rng);

  // embeddings: T x input_dim, T >= 1. Dropout follows g.training().
  AuxOutput Forward(Graph& g, const Var& embeddings) const;

  // Sum over configured tasks of CRF NLL or label-smoothed cross-entropy,
  // summed (not averaged) over positions. Throws std::invalid_argument when a
  // configured task has no labels.
  Var Loss(const AuxOutput& out, const EncodedUtterance& utt,
           double smoothing) const;

  AuxTags Tag(const AuxOutput& out) const;

  const AuxConfig& config() const { return config_; }
  int input_dim() const { return input_dim_; }
  int pos_classes() const { return pos_classes_; }

 private:
  AuxConfig config_;
  int input_dim_;
  int pos_classes_;
  std::vector<Conv1d> convs_;
  std::vector<LayerNorm> conv_norms_;
  Lstm te_lstm_;
  const Parameter* te_positions_ = nullptr;
  std::vector<SelfAttentionBlock> te_blocks_;
  Linear cws_proj_;
  const Parameter* cws_transitions_ = nullptr;
  Linear pos_proj_;
};

}  // namespace unifront

#endif  // UNIFRONT_AUX_MODEL_H_
