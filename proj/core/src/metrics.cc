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


#include "unifront/metrics.h"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "unifront/text_util.h"

namespace unifront {

namespace {

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string Cell(const std::optional<double>& v) {
  return v ? FormatFixed(*v, 4) : std::string("n/a");
}

}  // namespace

std::optional<double> F1Counts::Precision() const {
  if (predicted == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(predicted);
}

std::optional<double> F1Counts::Recall() const {
  if (gold == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(gold);
}

std::optional<double> F1Counts::F1() const {
  if (predicted + gold == 0) return std::nullopt;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(predicted + gold);
}

F1Counts& F1Counts::operator+=(const F1Counts& o) {
  tp += o.tp;
  predicted += o.predicted;
  gold += o.gold;
  return *this;
}

std::optional<double> AccuracyCounts::Value() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

AccuracyCounts& AccuracyCounts::operator+=(const AccuracyCounts& o) {
  correct += o.correct;
  total += o.total;
  return *this;
}

ProsodyCounts& ProsodyCounts::operator+=(const ProsodyCounts& o) {
  pw += o.pw;
  pp += o.pp;
  ip += o.ip;
  return *this;
}

std::vector<CwsTag> CanonicalizeBmes(std::span<const CwsTag> tags) {
  std::vector<CwsTag> out(tags.begin(), tags.end());
  bool open = false;
  auto close_previous = [&](size_t t) {
    // The open word ends at t - 1 without an E.
    out[t - 1] = out[t - 1] == CwsTag::kB ? CwsTag::kS : CwsTag::kE;
    open = false;
  };
  for (size_t t = 0; t < out.size(); ++t) {
    switch (out[t]) {
      case CwsTag::kB:
        if (open) close_previous(t);
        open = true;
        break;
      case CwsTag::kM:
        if (!open) {
          out[t] = CwsTag::kB;
          open = true;
        }
        break;
      case CwsTag::kE:
        if (open) {
          open = false;
        } else {
          out[t] = CwsTag::kS;
        }
        break;
      case CwsTag::kS:
        if (open) close_previous(t);
        break;
    }
  }
  if (open) close_previous(out.size());
  return out;
}

std::vector<std::pair<int, int>> ExtractSpans(std::span<const CwsTag> tags) {
  std::vector<CwsTag> canon = CanonicalizeBmes(tags);
  std::vector<std::pair<int, int>> spans;
  int start = 0;
  for (int t = 0; t < static_cast<int>(canon.size()); ++t) {
    switch (canon[t]) {
      case CwsTag::kB:
        start = t;
        break;
      case CwsTag::kM:
        break;
      case CwsTag::kE:
        spans.emplace_back(start, t);
        break;
      case CwsTag::kS:
        spans.emplace_back(t, t);
        break;
    }
  }
  return spans;
}

F1Counts BlockF1(std::span<const CwsTag> gold, std::span<const CwsTag> pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("block F1: gold has " + std::to_string(gold.size()) +
                                " tags, prediction has " + std::to_string(pred.size()));
  }
  auto g = ExtractSpans(gold);
  auto p = ExtractSpans(pred);
  F1Counts c;
  c.gold = static_cast<int64_t>(g.size());
  c.predicted = static_cast<int64_t>(p.size());
  // Both lists are sorted by start and spans do not overlap.
  size_t i = 0, j = 0;
  while (i < g.size() && j < p.size()) {
    if (g[i] == p[j]) {
      ++c.tp;
      ++i;
      ++j;
    } else if (g[i] < p[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return c;
}

AccuracyCounts G2pAccuracy(std::span<const int> gold, std::span<const int> pred,
                           const std::vector<bool>& mask) {
  if (mask.size() != gold.size()) {
    throw std::invalid_argument("G2P accuracy: mask and gold lengths differ");
  }
  AccuracyCounts c;
  for (size_t t = 0; t < gold.size(); ++t) {
    if (!mask[t]) continue;
    ++c.total;
    if (t < pred.size() && pred[t] == gold[t]) ++c.correct;
  }
  return c;
}

ProsodyCounts StackedProsodyF1(std::span<const int> gold, std::span<const int> pred) {
  ProsodyCounts c;
  F1Counts* levels[3] = {&c.pw, &c.pp, &c.ip};
  for (size_t t = 0; t < gold.size(); ++t) {
    const int p = t < pred.size() ? pred[t] : 0;
    for (int level = 1; level <= 3; ++level) {
      const bool g_pos = gold[t] >= level;
      const bool p_pos = p >= level;
      F1Counts& f = *levels[level - 1];
      f.gold += g_pos;
      f.predicted += p_pos;
      f.tp += g_pos && p_pos;
    }
  }
  return c;
}

AccuracyCounts TaggingAccuracy(std::span<const int> gold, std::span<const int> pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("tagging accuracy: length mismatch");
  }
  AccuracyCounts c;
  c.total = static_cast<int64_t>(gold.size());
  for (size_t t = 0; t < gold.size(); ++t) c.correct += gold[t] == pred[t];
  return c;
}

MetricsReport& MetricsReport::operator+=(const MetricsReport& o) {
  cws += o.cws;
  pos += o.pos;
  g2p += o.g2p;
  prosody += o.prosody;
  utterances += o.utterances;
  truncated += o.truncated;
  return *this;
}

nlohmann::ordered_json MetricsReport::ToJson() const {
  auto f1 = [](const F1Counts& c) {
    nlohmann::ordered_json j;
    j["f1"] = OptionalJson(c.F1());
    j["tp"] = c.tp;
    j["predicted"] = c.predicted;
    j["gold"] = c.gold;
    return j;
  };
  auto acc = [](const AccuracyCounts& c) {
    nlohmann::ordered_json j;
    j["accuracy"] = OptionalJson(c.Value());
    j["correct"] = c.correct;
    j["total"] = c.total;
    return j;
  };
  nlohmann::ordered_json j;
  j["cws_block_f1"] = OptionalJson(cws.F1());
  j["pos_acc"] = OptionalJson(pos.Value());
  j["g2p_acc"] = OptionalJson(g2p.Value());
  j["pw_f1"] = OptionalJson(prosody.pw.F1());
  j["pp_f1"] = OptionalJson(prosody.pp.F1());
  j["ip_f1"] = OptionalJson(prosody.ip.F1());
  j["utterances"] = utterances;
  j["truncated"] = truncated;
  j["counts"] = {{"cws", f1(cws)},        {"pos", acc(pos)},
                 {"g2p", acc(g2p)},       {"pw", f1(prosody.pw)},
                 {"pp", f1(prosody.pp)},  {"ip", f1(prosody.ip)}};
  return j;
}

std::string FormatMetricsTable(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  size_t name_width = 6;
  for (const auto& [name, r] : rows) name_width = std::max(name_width, name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "system";
  for (const char* col : {"G2P", "PW", "PP", "IP", "CWS", "POS"}) {
    out << "  " << std::right << std::setw(6) << col;
  }
  out << '\n';
  for (const auto& [name, r] : rows) {
    out << std::left << std::setw(static_cast<int>(name_width)) << name;
    for (const auto& v : {r.g2p.Value(), r.prosody.pw.F1(), r.prosody.pp.F1(),
                          r.prosody.ip.F1(), r.cws.F1(), r.pos.Value()}) {
      out << "  " << std::right << std::setw(6) << Cell(v);
    }
    out << '\n';
  }
  return out.str();
}

MetricsReport ScoreUtterance(const Utterance& gold, const PredictionRecord& pred) {
  // A pronunciation is correct when syllable and tone both match.
  std::map<std::pair<std::string, int>, int> ids;
  auto id_of = [&ids](const std::string& syl, int tone) {
    return ids.try_emplace({syl, tone}, static_cast<int>(ids.size())).first->second;
  };
  std::vector<int> gold_ids, pred_ids;
  for (size_t t = 0; t < gold.size(); ++t) gold_ids.push_back(id_of(gold.phonemes[t], gold.tones[t]));
  for (size_t t = 0; t < pred.phonemes.size(); ++t) {
    pred_ids.push_back(id_of(pred.phonemes[t], pred.tones[t]));
  }
  MetricsReport r;
  r.utterances = 1;
  r.truncated = pred.truncated ? 1 : 0;
  r.g2p = G2pAccuracy(gold_ids, pred_ids, gold.polyphone_mask);
  r.prosody = StackedProsodyF1(gold.prosody, pred.prosody);
  return r;
}

MetricsReport EvaluateDecoder(const DecoderModel& model,
                              const std::vector<Utterance>& corpus,
                              const Lexicon& lexicon, const DecodeOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("evaluate: empty corpus");
  MetricsReport total;
  for (const Utterance& u : corpus) {
    SequencePrediction pred = DecodeUtterance(model, u.chars, lexicon, options);
    total += ScoreUtterance(u, ToRecord(u.chars, pred, model.vocab()));
  }
  return total;
}

MetricsReport EvaluateRun(const Frontend& model, const std::vector<Utterance>& corpus,
                          const Lexicon& lexicon, const DecodeOptions& options) {
  MetricsReport total = EvaluateDecoder(FrontendDecoder(model), corpus, lexicon, options);
  if (!model.has_aux()) return total;
  const AuxConfig& aux = model.aux().config();
  for (const Utterance& u : corpus) {
    std::vector<int> ids;
    for (const auto& c : u.chars) ids.push_back(model.vocab().chars.Id(c));
    Graph g(false, false);
    AuxTags tags = model.aux().Tag(model.aux().Forward(g, model.Embed(g, ids)));
    if (aux.cws) {
      std::vector<CwsTag> pred;
      for (int t : tags.cws) pred.push_back(static_cast<CwsTag>(t));
      total.cws += BlockF1(u.cws, pred);
    }
    if (aux.pos && u.has_pos()) {
      std::vector<int> gold;
      for (const auto& p : u.pos) gold.push_back(model.vocab().pos.Id(p));
      total.pos += TaggingAccuracy(gold, tags.pos);
    }
  }
  return total;
}

}  // namespace unifront
