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


// Command-line entry point: synth-data, train-aux, finetune, predict, eval.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <glog/logging.h>

#include "unifront/config.h"
#include "unifront/hash.h"
#include "unifront/pipeline.h"

namespace {

using unifront::DecodeMode;
using unifront::RunConfig;

struct Flags {
  std::string config_path;
  std::optional<int64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
  int n = 0;
  std::optional<int64_t> steps;
  std::string corpus, lexicon, embeddings, aux_checkpoint, checkpoint, resume;
  std::string mode;
  bool no_aux = false;
};

RunConfig BuildConfig(const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) c.ApplyText(unifront::ReadFile(f.config_path), f.config_path);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw unifront::UsageError("--set expects key=value, got " + kv);
    c.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) {
    if (*f.seed < 0) throw unifront::UsageError("--seed must be >= 0");
    c.seed = static_cast<uint64_t>(*f.seed);
  }
  if (!f.out.empty()) c.paths.out = f.out;
  if (!f.corpus.empty()) c.paths.corpus = f.corpus;
  if (!f.lexicon.empty()) c.paths.lexicon = f.lexicon;
  if (!f.embeddings.empty()) c.paths.embeddings = f.embeddings;
  if (!f.aux_checkpoint.empty()) c.paths.aux_checkpoint = f.aux_checkpoint;
  if (!f.checkpoint.empty()) c.paths.checkpoint = f.checkpoint;
  if (!f.resume.empty()) c.paths.resume = f.resume;
  if (f.no_aux) c.model.use_aux = false;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;

  CLI::App app{"Unified Mandarin TTS front-end: segmentation, tagging, G2P and prosody"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", f.seed, "random seed, echoed into every artifact");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--set", f.overrides, "config override key=value (repeatable)");

  auto* synth = app.add_subcommand("synth-data", "write a synthetic corpus, lexicon and embeddings");
  synth->add_option("--n", f.n, "number of utterances")->required();

  auto* train_aux = app.add_subcommand("train-aux", "pre-train the auxiliary CWS/POS module");
  auto* finetune = app.add_subcommand("finetune", "jointly fine-tune the whole front-end");
  for (auto* cmd : {train_aux, finetune}) {
    cmd->add_option("--corpus", f.corpus, "training corpus (JSONL)");
    cmd->add_option("--lexicon", f.lexicon, "lexicon file");
    cmd->add_option("--embeddings", f.embeddings, "character embeddings (word2vec text)");
    cmd->add_option("--steps", f.steps, "number of optimizer steps");
  }
  finetune->add_option("--aux-checkpoint", f.aux_checkpoint, "checkpoint from train-aux");
  finetune->add_option("--resume", f.resume, "resume from a finetune checkpoint");
  finetune->add_flag("--no-aux", f.no_aux, "train without the auxiliary module");

  auto* predict = app.add_subcommand("predict", "decode a corpus into predictions.jsonl");
  auto* eval = app.add_subcommand("eval", "score a checkpoint on a labelled corpus");
  for (auto* cmd : {predict, eval}) {
    cmd->add_option("--checkpoint", f.checkpoint, "model checkpoint");
    cmd->add_option("--corpus", f.corpus, "input corpus (JSONL)");
    cmd->add_option("--lexicon", f.lexicon, "lexicon file");
  }
  predict->add_option("--mode", f.mode, "decoding mode")->check(CLI::IsMember({"ar", "sar"}));
  eval->add_option("--mode", f.mode, "decoding mode(s)")->check(CLI::IsMember({"ar", "sar", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig config = BuildConfig(f);
    if (f.steps) {
      if (*f.steps < 0) throw unifront::UsageError("--steps must be >= 0");
      (*train_aux ? config.aux_train : config.train).steps = *f.steps;
    }
    if (*synth) {
      unifront::RunSynthData(config, f.n, std::cout);
    } else if (*train_aux) {
      unifront::RunTrainAux(config, std::cout);
    } else if (*finetune) {
      unifront::RunFinetune(config, std::cout);
    } else if (*predict) {
      if (!f.mode.empty()) config.decode.mode = unifront::ParseDecodeMode(f.mode);
      if (unifront::RunPredict(config, std::cout) > 0) return 1;
    } else if (*eval) {
      std::vector<DecodeMode> modes = {config.decode.mode};
      if (f.mode == "both") {
        modes = {DecodeMode::kAr, DecodeMode::kSar};
      } else if (!f.mode.empty()) {
        modes = {unifront::ParseDecodeMode(f.mode)};
      }
      unifront::RunEval(config, modes, std::cout);
    }
  } catch (const unifront::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    // Bad config values are usage errors as well.
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
