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


#include "unifront/pipeline.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <glog/logging.h>
#include <nlohmann/json.hpp>

#include "unifront/checkpoint.h"
#include "unifront/corpus.h"
#include "unifront/embedding.h"
#include "unifront/frontend.h"
#include "unifront/hash.h"
#include "unifront/lexicon.h"
#include "unifront/metrics.h"
#include "unifront/synthetic.h"
#include "unifront/text_util.h"
#include "unifront/trainer.h"

namespace unifront {

namespace fs = std::filesystem;

namespace {

std::string OutPath(const RunConfig& c, const std::string& name) {
  return (fs::path(c.paths.out) / name).string();
}

void PrepareOut(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.paths.out, ec);
  if (ec || !fs::is_directory(c.paths.out)) {
    throw std::runtime_error("cannot create output directory " + c.paths.out);
  }
}

const std::string& Require(const std::string& path, const char* key) {
  if (path.empty()) throw UsageError(std::string("missing required path ") + key);
  if (!fs::exists(path)) throw std::runtime_error(std::string(key) + " does not exist: " + path);
  return path;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<EncodedUtterance> EncodeAll(const std::vector<Utterance>& utts,
                                        const VocabSet& vocab) {
  std::vector<EncodedUtterance> out;
  out.reserve(utts.size());
  for (const auto& u : utts) out.push_back(Encode(u, vocab));
  return out;
}

// Runs `steps` updates, logging progress, and returns the trace rows.
std::vector<TraceRow> RunSteps(TrainerBase* trainer, int64_t steps, const char* what) {
  std::vector<TraceRow> rows;
  while (trainer->step() < steps) {
    rows.push_back(trainer->Step());
    const TraceRow& r = rows.back();
    if ((r.step + 1) % 50 == 0 || r.step + 1 == steps) {
      LOG(INFO) << what << " step " << r.step + 1 << "/" << steps
                << " loss " << r.loss.total << " ratio " << r.ratio;
    }
  }
  return rows;
}

Matrix LoadEmbeddingMatrix(const RunConfig& c, const VocabSet& vocab) {
  EmbeddingTable table =
      EmbeddingTable::Load(Require(c.paths.embeddings, "paths.embeddings"), c.model.embedding_dim);
  return table.ToMatrix(vocab.chars);
}

}  // namespace

void WriteArtifactMeta(const std::string& artifact, const std::string& command,
                       const RunConfig& config,
                       const std::map<std::string, std::string>& input_hashes) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["artifact"] = fs::path(artifact).filename().string();
  j["sha1"] = GitBlobSha1File(artifact);
  j["seed"] = config.seed;
  j["inputs"] = input_hashes;
  j["config"] = config.Echo();
  WriteText(artifact + ".meta.json", j.dump(2) + "\n");
}

void RunSynthData(const RunConfig& config, int n, std::ostream& log) {
  if (n < 1) throw UsageError("--n must be >= 1");
  if (config.synth_pos_tags < 6 || config.synth_pos_tags > 10) {
    throw UsageError("synth.pos_tags must be in 6..10");
  }
  PrepareOut(config);
  const Lexicon lexicon = MakeSyntheticLexicon();
  SyntheticOptions opts;
  opts.pos_tagset_size = config.synth_pos_tags;
  const auto utts = GenerateSyntheticCorpus(n, config.seed, lexicon, opts);
  const std::string corpus = OutPath(config, "corpus.jsonl");
  const std::string lex = OutPath(config, "lexicon.txt");
  const std::string emb = OutPath(config, "embeddings.txt");
  WriteCorpus(corpus, utts);
  lexicon.Save(lex);
  EmbeddingTable::Random(lexicon.chars(), config.model.embedding_dim, config.seed).Save(emb);
  for (const auto& path : {corpus, lex, emb}) WriteArtifactMeta(path, "synth-data", config, {});
  size_t chars = 0, poly = 0;
  for (const auto& u : utts) {
    chars += u.size();
    for (bool b : u.polyphone_mask) poly += b;
  }
  log << "wrote " << utts.size() << " utterances (" << chars << " chars, " << poly
      << " polyphone sites), " << lexicon.size() << " lexicon entries to " << config.paths.out
      << "\n";
}

void RunTrainAux(const RunConfig& config, std::ostream& log) {
  if (!config.model.use_aux) throw UsageError("train-aux requires model.use_aux = true");
  PrepareOut(config);
  const Lexicon lexicon = Lexicon::Load(Require(config.paths.lexicon, "paths.lexicon"));
  const auto utts = ReadCorpus(Require(config.paths.corpus, "paths.corpus"), lexicon);
  const VocabSet vocab = BuildVocab(lexicon, utts, config.pos_tagset_size);
  Frontend model(config.model, vocab, LoadEmbeddingMatrix(config, vocab), config.seed);
  TrainConfig tc = config.aux_train;
  tc.seed = config.seed;
  AuxTrainer trainer(&model, EncodeAll(utts, vocab), tc);
  const auto rows = RunSteps(&trainer, tc.steps, "train-aux");

  const std::map<std::string, std::string> inputs = {
      {"corpus", GitBlobSha1File(config.paths.corpus)},
      {"lexicon", GitBlobSha1File(config.paths.lexicon)},
      {"embeddings", GitBlobSha1File(config.paths.embeddings)}};
  Checkpoint ckpt = model.ToCheckpoint();
  ckpt.header["config_echo"] = config.Echo();
  ckpt.header["inputs"] = inputs;
  const std::string ckpt_path = OutPath(config, "aux.ckpt");
  const std::string trace_path = OutPath(config, "aux_trace.csv");
  ckpt.Save(ckpt_path);
  WriteTraceCsv(trace_path, rows);
  WriteArtifactMeta(ckpt_path, "train-aux", config, inputs);
  WriteArtifactMeta(trace_path, "train-aux", config, inputs);
  log << "train-aux: " << rows.size() << " steps, final batch loss "
      << (rows.empty() ? 0.0 : rows.back().loss.total) << ", wrote " << ckpt_path << "\n";
}

void RunFinetune(const RunConfig& config, std::ostream& log) {
  PrepareOut(config);
  const Lexicon lexicon = Lexicon::Load(Require(config.paths.lexicon, "paths.lexicon"));
  std::map<std::string, std::string> inputs = {
      {"corpus", GitBlobSha1File(Require(config.paths.corpus, "paths.corpus"))},
      {"lexicon", GitBlobSha1File(config.paths.lexicon)}};
  std::unique_ptr<Frontend> model;
  std::vector<Utterance> utts;
  if (config.model.use_aux) {
    if (config.paths.aux_checkpoint.empty()) {
      throw std::runtime_error(
          "finetune with model.use_aux = true needs an auxiliary checkpoint (paths.aux_checkpoint)");
    }
    const Checkpoint aux = Checkpoint::Load(Require(config.paths.aux_checkpoint, "paths.aux_checkpoint"));
    inputs["aux_checkpoint"] = GitBlobSha1File(config.paths.aux_checkpoint);
    const VocabSet vocab = VocabSet::FromJson(aux.header.at("vocab"));
    const Matrix* table = aux.Find("embedding.table");
    if (table == nullptr) throw std::runtime_error("aux checkpoint lacks the embedding table");
    model = std::make_unique<Frontend>(config.model, vocab, *table, config.seed);
    model->LoadAuxFrom(aux);
    utts = LoadCorpus(config.paths.corpus, vocab, lexicon);
  } else {
    utts = ReadCorpus(config.paths.corpus, lexicon);
    const VocabSet vocab = BuildVocab(lexicon, utts, config.pos_tagset_size);
    inputs["embeddings"] = GitBlobSha1File(Require(config.paths.embeddings, "paths.embeddings"));
    model = std::make_unique<Frontend>(config.model, vocab, LoadEmbeddingMatrix(config, vocab),
                                       config.seed);
  }
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  Finetuner trainer(model.get(), EncodeAll(utts, model->vocab()), tc);
  if (!config.paths.resume.empty()) {
    trainer.Restore(Checkpoint::Load(Require(config.paths.resume, "paths.resume")));
    inputs["resume"] = GitBlobSha1File(config.paths.resume);
    log << "resumed at step " << trainer.step() << "\n";
  }
  const auto rows = RunSteps(&trainer, tc.steps, "finetune");

  Checkpoint ckpt = trainer.ToCheckpoint();
  ckpt.header["config_echo"] = config.Echo();
  ckpt.header["inputs"] = inputs;
  const std::string ckpt_path = OutPath(config, "model.ckpt");
  const std::string trace_path = OutPath(config, "finetune_trace.csv");
  ckpt.Save(ckpt_path);
  WriteTraceCsv(trace_path, rows);
  WriteArtifactMeta(ckpt_path, "finetune", config, inputs);
  WriteArtifactMeta(trace_path, "finetune", config, inputs);
  log << "finetune: " << rows.size() << " steps, final batch loss "
      << (rows.empty() ? 0.0 : rows.back().loss.total) << ", wrote " << ckpt_path << "\n";
}

size_t RunPredict(const RunConfig& config, std::ostream& log) {
  PrepareOut(config);
  const Checkpoint ckpt = Checkpoint::Load(Require(config.paths.checkpoint, "paths.checkpoint"));
  const auto model = Frontend::FromCheckpoint(ckpt);
  const Lexicon lexicon = Lexicon::Load(Require(config.paths.lexicon, "paths.lexicon"));
  std::ifstream in(Require(config.paths.corpus, "paths.corpus"));
  std::vector<std::vector<std::string>> inputs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      inputs.push_back(SplitUtf8(nlohmann::json::parse(line).at("text").get<std::string>()));
    } catch (const std::exception& e) {
      throw std::runtime_error(config.paths.corpus + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  BatchPredictResult result = BatchPredict(FrontendDecoder(*model), inputs, lexicon, config.decode);
  const std::string out_path = OutPath(config, "predictions.jsonl");
  std::string text;
  for (const auto& r : result.records) text += FormatPredictionRecord(r) + "\n";
  WriteText(out_path, text);
  WriteArtifactMeta(out_path, "predict", config,
                    {{"checkpoint", GitBlobSha1File(config.paths.checkpoint)},
                     {"corpus", GitBlobSha1File(config.paths.corpus)},
                     {"lexicon", GitBlobSha1File(config.paths.lexicon)}});
  log << "predict: " << result.records.size() << " records written, " << result.failures
      << " failed\n";
  return result.failures;
}

void RunEval(const RunConfig& config, const std::vector<DecodeMode>& modes, std::ostream& log) {
  if (modes.empty()) throw UsageError("no decode mode selected");
  PrepareOut(config);
  const Checkpoint ckpt = Checkpoint::Load(Require(config.paths.checkpoint, "paths.checkpoint"));
  const auto model = Frontend::FromCheckpoint(ckpt);
  const Lexicon lexicon = Lexicon::Load(Require(config.paths.lexicon, "paths.lexicon"));
  const auto utts = ReadCorpus(Require(config.paths.corpus, "paths.corpus"), lexicon);
  if (utts.empty()) throw std::runtime_error("evaluation corpus is empty");
  const std::map<std::string, std::string> inputs = {
      {"checkpoint", GitBlobSha1File(config.paths.checkpoint)},
      {"corpus", GitBlobSha1File(config.paths.corpus)},
      {"lexicon", GitBlobSha1File(config.paths.lexicon)}};
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["config"] = config.Echo();
  j["inputs"] = inputs;
  std::vector<std::pair<std::string, MetricsReport>> rows;
  for (DecodeMode mode : modes) {
    DecodeOptions opts = config.decode;
    opts.mode = mode;
    MetricsReport r = EvaluateRun(*model, utts, lexicon, opts);
    j["reports"][DecodeModeName(mode)] = r.ToJson();
    rows.emplace_back(mode == DecodeMode::kAr ? "AR" : "SAR", r);
  }
  const std::string table = FormatMetricsTable(rows);
  const std::string json_path = OutPath(config, "metrics.json");
  const std::string table_path = OutPath(config, "metrics.txt");
  WriteText(json_path, j.dump(2) + "\n");
  WriteText(table_path, table);
  WriteArtifactMeta(json_path, "eval", config, inputs);
  WriteArtifactMeta(table_path, "eval", config, inputs);
  log << table;
}

}  // namespace unifront
