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


#ifndef UNIFRONT_PIPELINE_H_
#define UNIFRONT_PIPELINE_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "unifront/config.h"
#include "unifront/inference.h"

namespace unifront {

// Raised for invalid user input; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Writes `<artifact>.meta.json` holding the command, seed, config echo,
// input hashes (role -> git blob SHA-1) and the artifact's own hash.
void WriteArtifactMeta(const std::string& artifact, const std::string& command,
                       const RunConfig& config,
                       const std::map<std::string, std::string>& input_hashes);

// Each command reads its inputs from config.paths and writes into
// config.paths.out. Summaries go to `log`. Runtime failures throw
// std::runtime_error; bad arguments throw UsageError.

// corpus.jsonl, lexicon.txt, embeddings.txt
void RunSynthData(const RunConfig& config, int n, std::ostream& log);
// aux.ckpt, aux_trace.csv
void RunTrainAux(const RunConfig& config, std::ostream& log);
// model.ckpt, finetune_trace.csv
void RunFinetune(const RunConfig& config, std::ostream& log);
// predictions.jsonl; returns the number of failed records.
size_t RunPredict(const RunConfig& config, std::ostream& log);
// metrics.json, metrics.txt
void RunEval(const RunConfig& config, const std::vector<DecodeMode>& modes,
             std::ostream& log);

}  // namespace unifront

#endif  // UNIFRONT_PIPELINE_H_
