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


#ifndef UNIFRONT_MAIN_MODEL_H_
#define UNIFRONT_MAIN_MODEL_H_

#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "unifront/autodiff.h"
#include "unifront/corpus.h"
#include "unifront/gmm_attention.h"
#include "unifront/layers.h"
#include "unifront/loss.h"

namespace unifront {

struct MainConfig {
  int enc_lstm_units = 128;
  int enc_proj = 32;
  int enc_attn_blocks = 3;
  bool enc_positional = false;  // sinusoidal positions after the projection
  int heads = 8;
  int dec_lstm_units = 1024;
  int dec_attn_blocks = 1;
  int label_embedding_dim = 32;  // per fed-back label family
  GmmAttentionConfig gmm;
  int postnet_layers = 3;
  int postnet_kernel = 5;
  int postnet_filters = 128;
  double dropout = 0.1;

  void Validate() const;
  nlohmann::json ToJson() const;
  static MainConfig FromJson(const nlohmann::json& j);
  bool operator==(const MainConfig& o) const { return ToJson() == o.ToJson(); }
};

// Output vocabulary sizes, reserved ids included.
struct OutputSizes {
  int phonemes = 0;
  int tones = 0;
  int prosody = 0;

  static OutputSizes From(const VocabSet& vocab) {
    return {vocab.phonemes.size(), vocab.tones.size(), vocab.prosody.size()};
  }
};

struct EncoderOutput {
  Var memory;  // T x enc_proj
  int length = 0;
};

struct LabelIds {
  int phoneme = SymbolTable::kGo;
  int tone = SymbolTable::kGo;
  int prosody = SymbolTable::kGo;
};

struct DecoderState {
  LstmState lstm;
  std::vector<std::vector<Var>> keys;    // per attention block
  std::vector<std::vector<Var>> values;  // per attention block
  Var means;                             // 1 x K
  Var context;                           // 1 x enc_proj
  int step = 0;
};

struct DecoderStepOutput {
  Var phoneme;    // 1 x V each
  Var tone;
  Var prosody;
  Var stop;       // 1 x 1
  Var attention;  // 1 x memory length
};

struct TeacherForcedOutput {
  LabelLogits before;
  Var stop;  // T x 1
  LabelLogits after;
  std::vector<Eigen::RowVectorXd> attention;
  std::vector<bool> used_gold;  // per step; step 0 is always GO
};

// Index of the largest entry among non-reserved symbols; ties go to the
// lower index.
int ArgmaxSymbol(const Eigen::Ref<const Eigen::RowVectorXd>& logits);

// Encoder, GMM-attention decoder and post-net. Parameters live under
// "main.".
class MainModel {
 public:
  MainModel(ParameterStore* store, const MainConfig& config, int embedding_dim,
            int aux_dim, const OutputSizes& sizes, std::mt19937_64* rng);

  // aux_dense may be invalid only when aux_dim == 0.
  EncoderOutput Encode(Graph& g, const Var& char_embeddings,
                       const Var& aux_dense) const;

  DecoderState InitialState(Graph& g) const;
  // One character-synchronous step; advances `state`.
  DecoderStepOutput Step(Graph& g, const LabelIds& prev, DecoderState* state,
                         const EncoderOutput& enc) const;

  // stacked: T x (Vp + Vt + Vr) concatenated logits.
  Var PostnetResidual(Graph& g, const Var& stacked) const;
  LabelLogits Refine(Graph& g, const LabelLogits& before) const;

  // Decodes enc.length steps. The previous labels for step t are the gold
  // labels of step t - 1 with probability `sampling_ratio` (one draw per step
  // from `rng`), else the argmax of step t - 1. With `sar_mask`, the gold
  // phoneme is always fed after positions where the mask is false. Throws
  // std::invalid_argument for ratio outside [0, 1] or misaligned targets.
  TeacherForcedOutput ForwardTeacherForced(
      Graph& g, const EncoderOutput& enc, const EncodedUtterance& targets,
      double sampling_ratio, std::mt19937_64* rng,
      const std::vector<bool>* sar_mask = nullptr) const;

  const MainConfig& config() const { return config_; }
  const OutputSizes& sizes() const { return sizes_; }
  int embedding_dim() const { return embedding_dim_; }
  int aux_dim() const { return aux_dim_; }

 private:
  void CheckLabels(const LabelIds& ids) const;

  MainConfig config_;
  int embedding_dim_;
  int aux_dim_;
  OutputSizes sizes_;

  Lstm enc_lstm_;
  Linear enc_proj_;
  std::vector<SelfAttentionBlock> enc_blocks_;

  const Parameter* emb_phoneme_ = nullptr;
  const Parameter* emb_tone_ = nullptr;
  const Parameter* emb_prosody_ = nullptr;
  Lstm dec_lstm_;
  std::vector<SelfAttentionBlock> dec_blocks_;
  Linear gmm_proj_;
  Linear head_phoneme_, head_tone_, head_prosody_, head_stop_;
  std::vector<Conv1d> postnet_;
};

}  // namespace unifront

#endif  // UNIFRONT_MAIN_MODEL_H_
