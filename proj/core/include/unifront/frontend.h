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


#ifndef UNIFRONT_FRONTEND_H_
#define UNIFRONT_FRONTEND_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unifront/aux_model.h"
#include "unifront/checkpoint.h"
#include "unifront/main_model.h"
#include "unifront/vocab.h"

namespace unifront {

struct FrontendConfig {
  int embedding_dim = 300;
  bool use_aux = true;
  AuxConfig aux;
  MainConfig main;

  void Validate() const;
  nlohmann::json ToJson() const;
  static FrontendConfig FromJson(const nlohmann::json& j);
  bool operator==(const FrontendConfig& o) const { return ToJson() == o.ToJson(); }
};

// Character embedding lookup, optional auxiliary module and main module.
class Frontend {
 public:
  // `embeddings` has one row per vocab.chars id and embedding_dim columns.
  Frontend(const FrontendConfig& config, VocabSet vocab, Matrix embeddings,
           uint64_t seed);

  const FrontendConfig& config() const { return config_; }
  const VocabSet& vocab() const { return vocab_; }
  const Matrix& embeddings() const { return embeddings_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }
  bool has_aux() const { return aux_ != nullptr; }
  const AuxModel& aux() const { return *aux_; }
  const MainModel& main() const { return *main_; }

  // Frozen embedding rows for `char_ids` as a graph constant.
  Var Embed(Graph& g, const std::vector<int>& char_ids) const;

  struct Encoding {
    AuxOutput aux;  // unset without an auxiliary module
    EncoderOutput encoder;
  };
  Encoding Encode(Graph& g, const std::vector<int>& char_ids) const;

  // Header carries the config echo and vocabulary; tensors hold the
  // embedding table and every parameter.
  Checkpoint ToCheckpoint() const;
  // Rebuilds the model and restores all parameters. Throws on a missing or
  // mis-shaped tensor.
  static std::unique_ptr<Frontend> FromCheckpoint(const Checkpoint& ckpt);

  // Copies the "aux." parameters of `ckpt` into this model after checking
  // that its aux config, embedding width and vocabulary match.
  void LoadAuxFrom(const Checkpoint& ckpt);

 private:
  FrontendConfig config_;
  VocabSet vocab_;
  Matrix embeddings_;
  ParameterStore params_;
  std::unique_ptr<AuxModel> aux_;
  std::unique_ptr<MainModel> main_;
};

}  // namespace unifront

#endif  // UNIFRONT_FRONTEND_H_
