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

#include "unifront/corpus.h"

#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <glog/logging.h>
#include <nlohmann/json.hpp>

#include "unifront/text_util.h"

namespace unifront {

char CwsTagChar(CwsTag tag) {
  static constexpr char kChars[] = {'B', 'M', 'E', 'S'};
  return kChars[static_cast<int>(tag)];
}

CwsTag ParseCwsTag(const std::string& s) {
  if (s == "B") return CwsTag::kB;
  if (s == "M") return CwsTag::kM;
  if (s == "E") return CwsTag::kE;
  if (s == "S") return CwsTag::kS;
  throw std::invalid_argument("unknown CWS tag '" + s + "'");
}

bool IsValidBmes(std::span<const CwsTag> tags) {
  bool in_word = false;
  for (CwsTag t : tags) {
    switch (t) {
      case CwsTag::kB:
        if (in_word) return false;
        in_word = true;
        break;
      case CwsTag::kM:
        if (!in_word) return false;
        break;
      case CwsTag::kE:
        if (!in_word) return false;
        in_word = false;
        break;
      case CwsTag::kS:
        if (in_word) return false;
        break;
    }
  }
  return !in_word;
}

void ValidateUtterance(const Utterance& utt) {
  const size_t n = utt.chars.size();
  if (n == 0) throw std::invalid_argument("utterance is empty");
  auto check_len = [n](const char* field, size_t len) {
    if (len != n) {
      throw std::invalid_argument(std::string("field '") + field + "' has " +
                                  std::to_string(len) + " items, text has " +
                                  std::to_string(n));
    }
  };
  check_len("cws", utt.cws.size());
  if (utt.has_pos()) check_len("pos", utt.pos.size());
  check_len("syl", utt.phonemes.size());
  check_len("tone", utt.tones.size());
  check_len("pros", utt.prosody.size());
  check_len("polyphone_mask", utt.polyphone_mask.size());
  if (!IsValidBmes(utt.cws)) {
    throw std::invalid_argument("cws is not a valid BMES sequence");
  }
  for (int t : utt.tones) {
    if (t < 1 || t > 5) {
      throw std::invalid_argument("tone " + std::to_string(t) +
                                  " outside 1..5");
    }
  }
  for (int p : utt.prosody) {
    if (p < kNoBreak || p > kIP) {
      throw std::invalid_argument("prosody label " + std::to_string(p) +
                                  " outside 0..3");
    }
  }
  if (utt.prosody.back() != kIP) {
    throw std::invalid_argument("last prosody label must be IP");
  }
}

namespace {

std::vector<std::string> Field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  if (!j.at(key).is_string()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' must be a string");
  }
  return SplitWhitespace(j.at(key).get<std::string>());
}

std::vector<int> ParseInts(const std::vector<std::string>& items,
                           const char* field) {
  std::vector<int> out;
  out.reserve(items.size());
  for (const auto& s : items) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw std::invalid_argument(std::string("field '") + field +
                                  "' has non-integer item '" + s + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Utterance ParseCorpusRecord(const std::string& line, const Lexicon& lexicon,
                            CorpusStats* stats) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  if (!j.contains("text") || !j.at("text").is_string()) {
    throw std::invalid_argument("missing field 'text'");
  }
  Utterance utt;
  utt.chars = SplitUtf8(j.at("text").get<std::string>());
  for (const auto& t : Field(j, "cws")) utt.cws.push_back(ParseCwsTag(t));
  if (j.contains("pos")) utt.pos = Field(j, "pos");
  utt.phonemes = Field(j, "syl");
  // Syllables may carry their tone as a trailing digit ("zhong1"); the
  // digit must then agree with the "tone" field when that is present.
  std::vector<int> suffix_tones;
  for (auto& syl : utt.phonemes) {
    if (syl.size() > 1 && syl.back() >= '1' && syl.back() <= '5') {
      suffix_tones.push_back(syl.back() - '0');
      syl.pop_back();
    }
  }
  if (!suffix_tones.empty() && suffix_tones.size() != utt.phonemes.size()) {
    throw std::invalid_argument("field 'syl' mixes tone-marked and unmarked syllables");
  }
  if (j.contains("tone")) {
    utt.tones = ParseInts(Field(j, "tone"), "tone");
    if (!suffix_tones.empty() && suffix_tones != utt.tones) {
      throw std::invalid_argument("tone digits in 'syl' disagree with field 'tone'");
    }
  } else if (!suffix_tones.empty()) {
    utt.tones = suffix_tones;
  } else {
    throw std::invalid_argument("missing field 'tone'");
  }
  utt.prosody = ParseInts(Field(j, "pros"), "pros");
  utt.polyphone_mask = BuildPolyphoneMask(utt.chars, lexicon);
  ValidateUtterance(utt);
  for (const auto& ch : utt.chars) {
    if (lexicon.Find(ch) == nullptr) {
      LOG(WARNING) << "character '" << ch
                   << "' missing from lexicon; pronunciation is <unk>";
      if (stats != nullptr) ++stats->unknown_chars;
    }
  }
  if (stats != nullptr) ++stats->records;
  return utt;
}

std::string FormatCorpusRecord(const Utterance& utt) {
  auto join = [](const auto& items, auto fmt) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += ' ';
      out += fmt(items[i]);
    }
    return out;
  };
  // Fixed key order keeps the output byte-stable.
  nlohmann::ordered_json j;
  j["text"] = JoinChars(utt.chars);
  j["cws"] = join(utt.cws, [](CwsTag t) { return std::string(1, CwsTagChar(t)); });
  if (utt.has_pos()) j["pos"] = join(utt.pos, [](const std::string& s) { return s; });
  j["syl"] = join(utt.phonemes, [](const std::string& s) { return s; });
  j["tone"] = join(utt.tones, [](int v) { return std::to_string(v); });
  j["pros"] = join(utt.prosody, [](int v) { return std::to_string(v); });
  return j.dump();
}

std::vector<Utterance> ReadCorpus(const std::string& path,
                                  const Lexicon& lexicon, CorpusStats* stats) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<Utterance> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(ParseCorpusRecord(line, lexicon, stats));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return out;
}

std::vector<Utterance> LoadCorpus(const std::string& path,
                                  const VocabSet& vocab,
                                  const Lexicon& lexicon, CorpusStats* stats) {
  std::vector<Utterance> utts = ReadCorpus(path, lexicon, stats);
  for (auto& utt : utts) {
    for (auto& p : utt.pos) {
      if (!vocab.pos.Contains(p)) {
        p = "<unk>";
        if (stats != nullptr) ++stats->unk_substitutions;
      }
    }
    for (auto& ph : utt.phonemes) {
      if (!vocab.phonemes.Contains(ph)) {
        ph = "<unk>";
        if (stats != nullptr) ++stats->unk_substitutions;
      }
    }
  }
  return utts;
}

void WriteCorpus(const std::string& path, const std::vector<Utterance>& utts) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& u : utts) os << FormatCorpusRecord(u) << '\n';
  if (!os) throw std::runtime_error("failed writing corpus file: " + path);
}

VocabSet BuildVocab(const Lexicon& lexicon, const std::vector<Utterance>& utts,
                    int pos_tagset_size) {
  VocabSet v = VocabSet::Create(pos_tagset_size);
  for (const auto& ch : lexicon.chars()) {
    v.chars.Add(ch);
    for (const auto& p : *lexicon.Find(ch)) v.phonemes.Add(p.syllable);
  }
  // Sorted insertion keeps ids independent of corpus order.
  std::set<std::string> chars, pos, phonemes;
  for (const auto& u : utts) {
    chars.insert(u.chars.begin(), u.chars.end());
    pos.insert(u.pos.begin(), u.pos.end());
    phonemes.insert(u.phonemes.begin(), u.phonemes.end());
  }
  for (const auto& c : chars) v.chars.Add(c);
  for (const auto& p : pos) {
    if (p != "<unk>") v.pos.Add(p);
  }
  for (const auto& p : phonemes) {
    if (p != "<unk>") v.phonemes.Add(p);
  }
  if (v.pos.size() > v.pos_capacity) {
    throw std::invalid_argument(
        "corpus uses " + std::to_string(v.pos.num_symbols()) +
        " POS tags but the tag-set size is " + std::to_string(pos_tagset_size));
  }
  return v;
}

EncodedUtterance Encode(const Utterance& utt, const VocabSet& vocab) {
  EncodedUtterance e;
  const size_t n = utt.size();
  e.chars.reserve(n);
  for (const auto& c : utt.chars) e.chars.push_back(vocab.chars.Id(c));
  for (CwsTag t : utt.cws) e.cws.push_back(static_cast<int>(t));
  for (const auto& p : utt.pos) e.pos.push_back(vocab.pos.Id(p));
  for (const auto& p : utt.phonemes) e.phonemes.push_back(vocab.phonemes.Id(p));
  for (int t : utt.tones) e.tones.push_back(vocab.tones.Id(std::to_string(t)));
  for (int p : utt.prosody) {
    e.prosody.push_back(vocab.prosody.Id(std::to_string(p)));
  }
  e.polyphone_mask = utt.polyphone_mask;
  return e;
}

Utterance Decode(const EncodedUtterance& enc, const VocabSet& vocab) {
  Utterance u;
  for (int c : enc.chars) u.chars.push_back(vocab.chars.Symbol(c));
  for (int t : enc.cws) u.cws.push_back(static_cast<CwsTag>(t));
  for (int p : enc.pos) u.pos.push_back(vocab.pos.Symbol(p));
  for (int p : enc.phonemes) u.phonemes.push_back(vocab.phonemes.Symbol(p));
  for (int t : enc.tones) u.tones.push_back(std::stoi(vocab.tones.Symbol(t)));
  for (int p : enc.prosody) {
    u.prosody.push_back(std::stoi(vocab.prosody.Symbol(p)));
  }
  u.polyphone_mask = enc.polyphone_mask;
  return u;
}

}  // namespace unifront
