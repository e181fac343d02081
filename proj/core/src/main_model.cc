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


#include "unifront/main_model.h"

#include <stdexcept>
#include <string>

namespace unifront {

void MainConfig::Validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw std::invalid_argument(std::string("main: ") + name + " must be >= 1");
  };
  positive(enc_lstm_units, "enc_lstm_units");
  positive(enc_proj, "enc_proj");
  positive(dec_lstm_units, "dec_lstm_units");
  positive(label_embedding_dim, "label_embedding_dim");
  positive(gmm.mixtures, "gmm mixtures");
  positive(postnet_layers, "postnet_layers");
  positive(postnet_filters, "postnet_filters");
  if (enc_attn_blocks < 0 || dec_attn_blocks < 0) {
    throw std::invalid_argument("main: attention block counts must be >= 0");
  }
  if (heads < 1 || enc_proj % heads != 0 || dec_lstm_units % heads != 0) {
    throw std::invalid_argument("main: heads (" + std::to_string(heads) +
                                ") must divide enc_proj and dec_lstm_units");
  }
  if (postnet_kernel < 1 || postnet_kernel % 2 == 0) {
    throw std::invalid_argument("main: postnet kernel must be odd");
  }
  if (!(gmm.sigma_min > 0.0)) throw std::invalid_argument("main: sigma_min must be > 0");
  if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("main: dropout must be in [0, 1)");
}

nlohmann::json MainConfig::ToJson() const {
  return {{"enc_lstm_units", enc_lstm_units},
          {"enc_proj", enc_proj},
          {"enc_attn_blocks", enc_attn_blocks},
          {"enc_positional", enc_positional},
          {"heads", heads},
          {"dec_lstm_units", dec_lstm_units},
          {"dec_attn_blocks", dec_attn_blocks},
          {"label_embedding_dim", label_embedding_dim},
          {"gmm_mixtures", gmm.mixtures},
          {"gmm_sigma_min", gmm.sigma_min},
          {"gmm_normalized", gmm.normalized},
          {"postnet_layers", postnet_layers},
          {"postnet_kernel", postnet_kernel},
          {"postnet_filters", postnet_filters},
          {"dropout", dropout}};
}

MainConfig MainConfig::FromJson(const nlohmann::json& j) {
  MainConfig c;
  c.enc_lstm_units = j.at("enc_lstm_units").get<int>();
  c.enc_proj = j.at("enc_proj").get<int>();
  c.enc_attn_blocks = j.at("enc_attn_blocks").get<int>();
  c.enc_positional = j.at("enc_positional").get<bool>();
  c.heads = j.at("heads").get<int>();
  c.dec_lstm_units = j.at("dec_lstm_units").get<int>();
  c.dec_attn_blocks = j.at("dec_attn_blocks").get<int>();
  c.label_embedding_dim = j.at("label_embedding_dim").get<int>();
  c.gmm.mixtures = j.at("gmm_mixtures").get<int>();
  c.gmm.sigma_min = j.at("gmm_sigma_min").get<double>();
  c.gmm.normalized = j.at("gmm_normalized").get<bool>();
  c.postnet_layers = j.at("postnet_layers").get<int>();
  c.postnet_kernel = j.at("postnet_kernel").get<int>();
  c.postnet_filters = j.at("postnet_filters").get<int>();
  c.dropout = j.at("dropout").get<double>();
  return c;
}

int ArgmaxSymbol(const Eigen::Ref<const Eigen::RowVectorXd>& logits) {
  if (logits.size() <= SymbolTable::kNumReserved) {
    throw std::invalid_argument("ArgmaxSymbol: table has no real symbols");
  }
  Eigen::Index best;
  logits.tail(logits.size() - SymbolTable::kNumReserved).maxCoeff(&best);
  return static_cast<int>(best) + SymbolTable::kNumReserved;
}

MainModel::MainModel(ParameterStore* store, const MainConfig& config,
                     int embedding_dim, int aux_dim, const OutputSizes& sizes,
                     std::mt19937_64* rng)
    : config_(config), embedding_dim_(embedding_dim), aux_dim_(aux_dim), sizes_(sizes) {
  config_.Validate();
  if (embedding_dim < 1 || aux_dim < 0) {
    throw std::invalid_argument("main: invalid input widths");
  }
  for (int v : {sizes.phonemes, sizes.tones, sizes.prosody}) {
    if (v <= SymbolTable::kNumReserved) {
      throw std::invalid_argument("main: every output vocabulary needs real symbols");
    }
  }
  const MainConfig& c = config_;
  enc_lstm_ = Lstm(store, "main.enc.lstm", embedding_dim + aux_dim, c.enc_lstm_units, rng);
  enc_proj_ = Linear(store, "main.enc.proj", c.enc_lstm_units, c.enc_proj, rng);
  for (int b = 0; b < c.enc_attn_blocks; ++b) {
    enc_blocks_.emplace_back(store, "main.enc.block" + std::to_string(b), c.enc_proj,
                             c.heads, c.dropout, rng);
  }
  const int d = c.label_embedding_dim;
  emb_phoneme_ = &store->Create("main.dec.emb_phoneme", sizes.phonemes, d, Init::kXavier, rng);
  emb_tone_ = &store->Create("main.dec.emb_tone", sizes.tones, d, Init::kXavier, rng);
  emb_prosody_ = &store->Create("main.dec.emb_prosody", sizes.prosody, d, Init::kXavier, rng);
  dec_lstm_ = Lstm(store, "main.dec.lstm", 3 * d + c.enc_proj, c.dec_lstm_units, rng);
  for (int b = 0; b < c.dec_attn_blocks; ++b) {
    dec_blocks_.emplace_back(store, "main.dec.block" + std::to_string(b),
                             c.dec_lstm_units, c.heads, c.dropout, rng);
  }
  gmm_proj_ = Linear(store, "main.dec.gmm", c.dec_lstm_units, 3 * c.gmm.mixtures, rng);
  const int head_in = c.dec_lstm_units + c.enc_proj;
  head_phoneme_ = Linear(store, "main.head.phoneme", head_in, sizes.phonemes, rng);
  head_tone_ = Linear(store, "main.head.tone", head_in, sizes.tones, rng);
  head_prosody_ = Linear(store, "main.head.prosody", head_in, sizes.prosody, rng);
  head_stop_ = Linear(store, "main.head.stop", head_in, 1, rng);
  const int total = sizes.phonemes + sizes.tones + sizes.prosody;
  int in = total;
  for (int l = 0; l < c.postnet_layers; ++l) {
    const int out = l + 1 == c.postnet_layers ? total : c.postnet_filters;
    postnet_.emplace_back(store, "main.postnet" + std::to_string(l), in, out,
                          c.postnet_kernel, 1, rng);
    in = out;
  }
}

EncoderOutput MainModel::Encode(Graph& g, const Var& char_embeddings,
                                const Var& aux_dense) const {
  const Eigen::Index T = char_embeddings.rows();
  if (T < 1) throw std::invalid_argument("encode: empty input");
  if (char_embeddings.cols() != embedding_dim_) {
    throw std::invalid_argument("encode: expected character embedding width " +
                                std::to_string(embedding_dim_) + ", got " +
                                std::to_string(char_embeddings.cols()));
  }
  Var x = char_embeddings;
  if (aux_dim_ > 0) {
    if (!aux_dense.valid()) {
      throw std::invalid_argument("encode: expected auxiliary width " +
                                  std::to_string(aux_dim_) + ", got none");
    }
    if (aux_dense.cols() != aux_dim_ || aux_dense.rows() != T) {
      throw std::invalid_argument(
          "encode: expected auxiliary input " + std::to_string(T) + " x " +
          std::to_string(aux_dim_) + ", got " + std::to_string(aux_dense.rows()) +
          " x " + std::to_string(aux_dense.cols()));
    }
    x = ad::ConcatCols({char_embeddings, aux_dense});
  } else if (aux_dense.valid() && aux_dense.cols() != 0) {
    throw std::invalid_argument("encode: expected auxiliary width 0, got " +
                                std::to_string(aux_dense.cols()));
  }
  Var h = enc_proj_.Forward(g, enc_lstm_.Forward(g, x));
  if (config_.enc_positional) {
    h = ad::Add(h, g.Constant(SinusoidalPositions(static_cast<int>(T), config_.enc_proj)));
  }
  h = ad::Dropout(h, config_.dropout);
  for (const auto& block : enc_blocks_) h = block.Forward(g, h);
  return {h, static_cast<int>(T)};
}

DecoderState MainModel::InitialState(Graph& g) const {
  DecoderState s;
  s.lstm = dec_lstm_.ZeroState(g);
  s.keys.resize(dec_blocks_.size());
  s.values.resize(dec_blocks_.size());
  s.means = g.Constant(Matrix::Zero(1, config_.gmm.mixtures));
  s.context = g.Constant(Matrix::Zero(1, config_.enc_proj));
  return s;
}

void MainModel::CheckLabels(const LabelIds& ids) const {
  auto check = [](int id, int size, const char* family) {
    if (id < 0 || id >= size) {
      throw std::out_of_range(std::string("decoder: ") + family + " label " +
                              std::to_string(id) + " outside [0, " +
                              std::to_string(size) + ")");
    }
  };
  check(ids.phoneme, sizes_.phonemes, "phoneme");
  check(ids.tone, sizes_.tones, "tone");
  check(ids.prosody, sizes_.prosody, "prosody");
}

DecoderStepOutput MainModel::Step(Graph& g, const LabelIds& prev,
                                  DecoderState* state,
                                  const EncoderOutput& enc) const {
  CheckLabels(prev);
  Var x = ad::ConcatCols({ad::Rows(g.Param(*emb_phoneme_), {prev.phoneme}),
                          ad::Rows(g.Param(*emb_tone_), {prev.tone}),
                          ad::Rows(g.Param(*emb_prosody_), {prev.prosody}),
                          state->context});
  state->lstm = dec_lstm_.Step(g, x, state->lstm);
  Var s = ad::Dropout(state->lstm.h, config_.dropout);
  for (size_t b = 0; b < dec_blocks_.size(); ++b) {
    s = dec_blocks_[b].Step(g, s, &state->keys[b], &state->values[b]);
  }
  ad::GmmStepVars att =
      ad::GmmAttentionStep(gmm_proj_.Forward(g, s), state->means, enc.length, config_.gmm);
  state->means = att.means;
  state->context = ad::MatMul(att.weights, enc.memory);
  ++state->step;
  Var features = ad::ConcatCols({s, state->context});
  return {head_phoneme_.Forward(g, features), head_tone_.Forward(g, features),
          head_prosody_.Forward(g, features), head_stop_.Forward(g, features),
          att.weights};
}

Var MainModel::PostnetResidual(Graph& g, const Var& stacked) const {
  Var h = stacked;
  for (size_t l = 0; l < postnet_.size(); ++l) {
    h = postnet_[l].Forward(g, h);
    if (l + 1 < postnet_.size()) h = ad::Dropout(ad::Tanh(h), config_.dropout);
  }
  return h;
}

LabelLogits MainModel::Refine(Graph& g, const LabelLogits& before) const {
  if (before.phoneme.cols() != sizes_.phonemes || before.tone.cols() != sizes_.tones ||
      before.prosody.cols() != sizes_.prosody ||
      before.tone.rows() != before.phoneme.rows() ||
      before.prosody.rows() != before.phoneme.rows()) {
    throw std::invalid_argument("postnet: logit streams have unexpected shapes");
  }
  Var stacked = ad::ConcatCols({before.phoneme, before.tone, before.prosody});
  Var refined = ad::Add(stacked, PostnetResidual(g, stacked));
  return {ad::SliceCols(refined, 0, sizes_.phonemes),
          ad::SliceCols(refined, sizes_.phonemes, sizes_.tones),
          ad::SliceCols(refined, sizes_.phonemes + sizes_.tones, sizes_.prosody)};
}

TeacherForcedOutput MainModel::ForwardTeacherForced(
    Graph& g, const EncoderOutput& enc, const EncodedUtterance& targets,
    double sampling_ratio, std::mt19937_64* rng,
    const std::vector<bool>* sar_mask) const {
  if (!(sampling_ratio >= 0.0 && sampling_ratio <= 1.0)) {
    throw std::invalid_argument("sampling ratio must be in [0, 1], got " +
                                std::to_string(sampling_ratio));
  }
  const size_t T = static_cast<size_t>(enc.length);
  if (targets.phonemes.size() != T || targets.tones.size() != T ||
      targets.prosody.size() != T) {
    throw std::invalid_argument("teacher forcing: targets must have " +
                                std::to_string(T) + " steps");
  }
  if (sar_mask != nullptr && sar_mask->size() != T) {
    throw std::invalid_argument("teacher forcing: SAR mask must have " +
                                std::to_string(T) + " entries");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  TeacherForcedOutput out;
  DecoderState state = InitialState(g);
  std::vector<Var> ph, tn, pr, stop;
  LabelIds prev;
  for (size_t t = 0; t < T; ++t) {
    if (t == 0) {
      out.used_gold.push_back(true);
    } else {
      const bool gold = coin(*rng) < sampling_ratio;
      out.used_gold.push_back(gold);
      if (gold) {
        prev = {targets.phonemes[t - 1], targets.tones[t - 1], targets.prosody[t - 1]};
      } else {
        prev = {ArgmaxSymbol(ph.back().value()), ArgmaxSymbol(tn.back().value()),
                ArgmaxSymbol(pr.back().value())};
      }
      if (sar_mask != nullptr && !(*sar_mask)[t - 1]) prev.phoneme = targets.phonemes[t - 1];
    }
    DecoderStepOutput step = Step(g, prev, &state, enc);
    ph.push_back(step.phoneme);
    tn.push_back(step.tone);
    pr.push_back(step.prosody);
    stop.push_back(step.stop);
    out.attention.push_back(step.attention.value());
  }
  out.before = {ad::ConcatRows(ph), ad::ConcatRows(tn), ad::ConcatRows(pr)};
  out.stop = ad::ConcatRows(stop);
  out.after = Refine(g, out.before);
  return out;
}

}  // namespace unifront
