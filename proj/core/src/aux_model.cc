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


#include "unifront/aux_model.h"

#include <algorithm>
#include <stdexcept>

#include "unifront/crf.h"
#include "unifront/loss.h"

namespace unifront {

namespace {

const char* VariantName(AuxVariant v) { return v == AuxVariant::kDcnn ? "dcnn" : "te"; }
const char* HeadName(TagHead h) { return h == TagHead::kCrf ? "crf" : "softmax"; }

AuxVariant ParseVariant(const std::string& s) {
  if (s == "dcnn") return AuxVariant::kDcnn;
  if (s == "te") return AuxVariant::kTe;
  throw std::invalid_argument("unknown aux variant '" + s + "' (dcnn|te)");
}

TagHead ParseHead(const std::string& s) {
  if (s == "crf") return TagHead::kCrf;
  if (s == "softmax") return TagHead::kSoftmax;
  throw std::invalid_argument("unknown tag head '" + s + "' (crf|softmax)");
}

std::vector<int> ArgmaxRows(const Matrix& m) {
  std::vector<int> out(m.rows());
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    Eigen::Index best;
    m.row(t).maxCoeff(&best);
    out[t] = static_cast<int>(best);
  }
  return out;
}

}  // namespace

int AuxConfig::DenseWidth() const {
  return variant == AuxVariant::kDcnn ? dcnn_filters : te_lstm_units;
}

void AuxConfig::Validate() const {
  if (!cws && !pos) throw std::invalid_argument("aux: at least one task required");
  if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("aux: dropout must be in [0, 1)");
  if (variant == AuxVariant::kDcnn) {
    if (dcnn_layers < 1 || dcnn_filters < 1) {
      throw std::invalid_argument("aux: dcnn needs >= 1 layer and filter");
    }
    if (static_cast<int>(dcnn_dilations.size()) != dcnn_layers) {
      throw std::invalid_argument("aux: need one dilation per dcnn layer");
    }
    for (size_t i = 0; i < dcnn_dilations.size(); ++i) {
      if (dcnn_dilations[i] < 1 || (i > 0 && dcnn_dilations[i] <= dcnn_dilations[i - 1])) {
        throw std::invalid_argument("aux: dilations must be positive and strictly increasing");
      }
    }
    if (dcnn_kernel < 1 || dcnn_kernel % 2 == 0) {
      throw std::invalid_argument("aux: dcnn kernel must be odd");
    }
  } else {
    if (te_lstm_units < 1 || te_attn_blocks < 0 || te_max_positions < 1) {
      throw std::invalid_argument("aux: invalid te sizes");
    }
    if (te_heads < 1 || te_lstm_units % te_heads != 0) {
      throw std::invalid_argument("aux: te heads must divide the lstm width");
    }
  }
}

nlohmann::json AuxConfig::ToJson() const {
  return {{"variant", VariantName(variant)},
          {"cws", cws},
          {"pos", pos},
          {"dcnn_layers", dcnn_layers},
          {"dcnn_kernel", dcnn_kernel},
          {"dcnn_filters", dcnn_filters},
          {"dcnn_dilations", dcnn_dilations},
          {"te_lstm_units", te_lstm_units},
          {"te_attn_blocks", te_attn_blocks},
          {"te_heads", te_heads},
          {"te_positional", te_positional},
          {"te_max_positions", te_max_positions},
          {"cws_head", HeadName(cws_head)},
          {"pos_head", HeadName(pos_head)},
          {"dropout", dropout}};
}

AuxConfig AuxConfig::FromJson(const nlohmann::json& j) {
  AuxConfig c;
  c.variant = ParseVariant(j.at("variant").get<std::string>());
  c.cws = j.at("cws").get<bool>();
  c.pos = j.at("pos").get<bool>();
  c.dcnn_layers = j.at("dcnn_layers").get<int>();
  c.dcnn_kernel = j.at("dcnn_kernel").get<int>();
  c.dcnn_filters = j.at("dcnn_filters").get<int>();
  c.dcnn_dilations = j.at("dcnn_dilations").get<std::vector<int>>();
  c.te_lstm_units = j.at("te_lstm_units").get<int>();
  c.te_attn_blocks = j.at("te_attn_blocks").get<int>();
  c.te_heads = j.at("te_heads").get<int>();
  c.te_positional = j.at("te_positional").get<bool>();
  c.te_max_positions = j.at("te_max_positions").get<int>();
  c.cws_head = ParseHead(j.at("cws_head").get<std::string>());
  c.pos_head = ParseHead(j.at("pos_head").get<std::string>());
  c.dropout = j.at("dropout").get<double>();
  return c;
}

AuxModel::AuxModel(ParameterStore* store, const AuxConfig& config,
                   int input_dim, int pos_classes, std::mt19937_64* rng)
    : config_(config), input_dim_(input_dim), pos_classes_(pos_classes) {
  config_.Validate();
  if (input_dim < 1) throw std::invalid_argument("aux: input dim must be >= 1");
  if (config_.variant == AuxVariant::kDcnn) {
    int in = input_dim;
    for (int l = 0; l < config_.dcnn_layers; ++l) {
      const std::string name = "aux.dcnn" + std::to_string(l);
      convs_.emplace_back(store, name, in, config_.dcnn_filters,
                          config_.dcnn_kernel, config_.dcnn_dilations[l], rng);
      conv_norms_.emplace_back(store, name + ".norm", config_.dcnn_filters);
      in = config_.dcnn_filters;
    }
  } else {
    te_lstm_ = Lstm(store, "aux.te.lstm", input_dim, config_.te_lstm_units, rng);
    if (config_.te_positional) {
      te_positions_ = &store->Create("aux.te.positions", config_.te_max_positions,
                                     config_.te_lstm_units, Init::kNormal, rng);
    }
    for (int b = 0; b < config_.te_attn_blocks; ++b) {
      te_blocks_.emplace_back(store, "aux.te.block" + std::to_string(b),
                              config_.te_lstm_units, config_.te_heads,
                              config_.dropout, rng);
    }
  }
  const int width = config_.DenseWidth();
  if (config_.cws) {
    cws_proj_ = Linear(store, "aux.cws", width, kNumCwsTags, rng);
    if (config_.cws_head == TagHead::kCrf) {
      cws_transitions_ = &store->Create("aux.cws.transitions", kNumCwsTags,
                                        kNumCwsTags, Init::kZeros, rng);
    }
  }
  if (config_.pos) {
    if (pos_classes < 1) throw std::invalid_argument("aux: pos classes must be >= 1");
    pos_proj_ = Linear(store, "aux.pos", width, pos_classes, rng);
    if (config_.pos_head == TagHead::kCrf) {
      throw std::invalid_argument("aux: CRF head is only supported for CWS");
    }
  }
}

AuxOutput AuxModel::Forward(Graph& g, const Var& embeddings) const {
  if (embeddings.rows() < 1) throw std::invalid_argument("aux: empty input");
  if (embeddings.cols() != input_dim_) {
    throw std::invalid_argument("aux: expected embedding width " +
                                std::to_string(input_dim_) + ", got " +
                                std::to_string(embeddings.cols()));
  }
  Var h = embeddings;
  if (config_.variant == AuxVariant::kDcnn) {
    for (size_t l = 0; l < convs_.size(); ++l) {
      h = conv_norms_[l].Forward(g, ad::Relu(convs_[l].Forward(g, h)));
      h = ad::Dropout(h, config_.dropout);
    }
  } else {
    h = te_lstm_.Forward(g, h);
    if (te_positions_ != nullptr) {
      std::vector<int> rows(h.rows());
      for (size_t t = 0; t < rows.size(); ++t) {
        rows[t] = std::min<int>(static_cast<int>(t), config_.te_max_positions - 1);
      }
      h = ad::Add(h, ad::Rows(g.Param(*te_positions_), rows));
    }
    h = ad::Dropout(h, config_.dropout);
    for (const auto& block : te_blocks_) h = block.Forward(g, h);
  }
  AuxOutput out;
  out.dense = h;
  if (config_.cws) out.cws_scores = cws_proj_.Forward(g, h);
  if (config_.pos) out.pos_scores = pos_proj_.Forward(g, h);
  return out;
}

Var AuxModel::Loss(const AuxOutput& out, const EncodedUtterance& utt,
                   double smoothing) const {
  const size_t T = static_cast<size_t>(out.dense.rows());
  Graph* g = out.dense.graph();
  std::vector<Var> terms;
  std::vector<double> ones(T, 1.0);
  if (config_.cws) {
    if (utt.cws.size() != T) {
      throw std::invalid_argument("aux: utterance lacks CWS labels for " +
                                  std::to_string(T) + " positions");
    }
    if (config_.cws_head == TagHead::kCrf) {
      terms.push_back(ad::CrfNll(out.cws_scores, g->Param(*cws_transitions_), utt.cws));
    } else {
      terms.push_back(ad::SoftmaxCrossEntropy(out.cws_scores, utt.cws, ones, smoothing));
    }
  }
  if (config_.pos) {
    if (utt.pos.size() != T) {
      throw std::invalid_argument("aux: utterance lacks POS labels for " +
                                  std::to_string(T) + " positions");
    }
    terms.push_back(ad::SoftmaxCrossEntropy(out.pos_scores, utt.pos, ones, smoothing));
  }
  Var total = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) total = ad::Add(total, terms[i]);
  return total;
}

AuxTags AuxModel::Tag(const AuxOutput& out) const {
  AuxTags tags;
  if (config_.cws) {
    tags.cws = config_.cws_head == TagHead::kCrf
                   ? CrfDecode(out.cws_scores.value(), cws_transitions_->value())
                   : ArgmaxRows(out.cws_scores.value());
  }
  if (config_.pos) tags.pos = ArgmaxRows(out.pos_scores.value());
  return tags;
}

}  // namespace unifront
