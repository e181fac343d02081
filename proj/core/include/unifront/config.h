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


#ifndef UNIFRONT_CONFIG_H_
#define UNIFRONT_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "unifront/frontend.h"
#include "unifront/inference.h"
#include "unifront/trainer.h"

namespace unifront {

struct PathConfig {
  std::string corpus;
  std::string lexicon;
  std::string embeddings;
  std::string aux_checkpoint;
  std::string checkpoint;
  std::string resume;
  std::string out = ".";
};

// Everything a command needs. Keys are dotted ("main.dec_lstm_units");
// see RunConfig::Keys() for the full list.
struct RunConfig {
  PathConfig paths;
  FrontendConfig model;
  int pos_tagset_size = 99;
  TrainConfig aux_train = DefaultAuxTrain();
  TrainConfig train = DefaultTrain();
  DecodeOptions decode;
  uint64_t seed = 0;
  int synth_pos_tags = 8;

  static TrainConfig DefaultAuxTrain();
  static TrainConfig DefaultTrain();

  // Applies "key = value" lines ('#' starts a comment). Throws
  // std::invalid_argument naming the line for unknown keys or bad values.
  void ApplyText(const std::string& text, const std::string& source = "config");
  void Set(const std::string& key, const std::string& value);
  std::string Get(const std::string& key) const;

  // Every key except paths.*, sorted, with canonical values.
  std::map<std::string, std::string> Echo() const;
  std::string EchoText() const;

  static std::vector<std::string> Keys();
};

}  // namespace unifront

#endif  // UNIFRONT_CONFIG_H_
