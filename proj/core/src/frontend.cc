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


#include "unifront/frontend.h"

#include <random>
#include <stdexcept>

namespace unifront {

void FrontendConfig::Validate() const {
  if (embedding_dim < 1) throw std::invalid_argument("embedding_dim must be >= 1");
  if (use_aux) aux.Validate();
  main.Validate();
}

nlohmann::json FrontendConfig::ToJson() const {
  return {{"embedding_dim", embedding_dim},
          {"use_aux", use_aux},
          {"aux", aux.ToJson()},
          {"main", main.ToJson()}};
}

FrontendConfig FrontendConfig::FromJson(const nlohmann::json& j) {
  FrontendConfig c;
  c.embedding_dim = j.at("embedding_dim").get<int>();
  c.use_aux = j.at("use_aux").get<bool>();
  c.aux = AuxConfig::FromJson(j.at("aux"));
  c.main = MainConfig::FromJson(j.at("main"));
  return c;
}

Frontend::Frontend(const FrontendConfig& config, VocabSet vocab,
                   Matrix embeddings, uint64_t seed)
    : config_(config), vocab_(std::move(vocab)), embeddings_(std::move(embeddings)) {
  config_.Validate();
  if (embeddings_.rows() != vocab_.chars.size() || embeddings_.cols() != config_.embedding_dim) {
    throw std::invalid_argument(
        "embedding table is " + std::to_string(embeddings_.rows()) + " x " +
        std::to_string(embeddings_.cols()) + ", expected " +
        std::to_string(vocab_.chars.size()) + " x " + std::to_string(config_.embedding_dim));
  }
  std::mt19937_64 rng(seed);
  int aux_dim = 0;
  if (config_.use_aux) {
    aux_ = std::make_unique<AuxModel>(&params_, config_.aux, config_.embedding_dim,
                                      vocab_.pos_capacity, &rng);
    aux_dim = config_.aux.DenseWidth();
  }
  main_ = std::make_unique<MainModel>(&params_, config_.main, config_.embedding_dim, aux_dim,
                                      OutputSizes::From(vocab_), &rng);
}

Var Frontend::Embed(Graph& g, const std::vector<int>& char_ids) const {
  Matrix x(static_cast<Eigen::Index>(char_ids.size()), embeddings_.cols());
  for (size_t t = 0; t < char_ids.size(); ++t) {
    if (char_ids[t] < 0 || char_ids[t] >= embeddings_.rows()) {
      throw std::out_of_range("character id " + std::to_string(char_ids[t]) +
                              " outside the embedding table");
    }
    x.row(static_cast<Eigen::Index>(t)) = embeddings_.row(char_ids[t]);
  }
  return g.Constant(std::move(x));
}

Frontend::Encoding Frontend::Encode(Graph& g, const std::vector<int>& char_ids) const {
  if (char_ids.empty()) throw std::invalid_argument("cannot encode an empty utterance");
  Encoding e;
  Var x = Embed(g, char_ids);
  if (aux_) e.aux = aux_->Forward(g, x);
  e.encoder = main_->Encode(g, x, e.aux.dense);
  return e;
}

Checkpoint Frontend::ToCheckpoint() const {
  Checkpoint ckpt;
  ckpt.header["config"] = config_.ToJson();
  ckpt.header["vocab"] = vocab_.ToJson();
  ckpt.Add("embedding.table", embeddings_);
  ckpt.AddParameters(params_);
  return ckpt;
}

std::unique_ptr<Frontend> Frontend::FromCheckpoint(const Checkpoint& ckpt) {
  if (!ckpt.header.contains("config") || !ckpt.header.contains("vocab")) {
    throw std::runtime_error("checkpoint lacks a model config or vocabulary");
  }
  const Matrix* table = ckpt.Find("embedding.table");
  if (table == nullptr) throw std::runtime_error("checkpoint lacks the embedding table");
  auto model = std::make_unique<Frontend>(FrontendConfig::FromJson(ckpt.header.at("config")),
                                          VocabSet::FromJson(ckpt.header.at("vocab")),
                                          *table, 0);
  ckpt.RestoreParameters(&model->params_);
  return model;
}

void Frontend::LoadAuxFrom(const Checkpoint& ckpt) {
  if (!aux_) throw std::runtime_error("model has no auxiliary module to load");
  if (!ckpt.header.contains("config") || !ckpt.header.contains("vocab")) {
    throw std::runtime_error("aux checkpoint lacks a model config or vocabulary");
  }
  const FrontendConfig other = FrontendConfig::FromJson(ckpt.header.at("config"));
  if (!other.use_aux || !(other.aux == config_.aux)) {
    throw std::runtime_error("aux checkpoint architecture does not match the config: " +
                             other.aux.ToJson().dump() + " vs " + config_.aux.ToJson().dump());
  }
  if (other.embedding_dim != config_.embedding_dim) {
    throw std::runtime_error("aux checkpoint embedding width " +
                             std::to_string(other.embedding_dim) + " != " +
                             std::to_string(config_.embedding_dim));
  }
  if (!(VocabSet::FromJson(ckpt.header.at("vocab")) == vocab_)) {
    throw std::runtime_error("aux checkpoint vocabulary differs from the model's");
  }
  ckpt.RestoreParameters(&params_, "aux.");
}

}  // namespace unifront
