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

#include "unifront/lexicon.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "unifront/text_util.h"

namespace unifront {

void Lexicon::Add(const std::string& ch, std::vector<Pronunciation> prons) {
  if (prons.empty()) {
    throw std::invalid_argument("lexicon entry for '" + ch +
                                "' has no pronunciations");
  }
  for (const auto& p : prons) {
    if (p.tone < 1 || p.tone > 5) {
      throw std::invalid_argument("lexicon entry for '" + ch +
                                  "' has tone outside 1..5");
    }
    if (p.syllable.empty()) {
      throw std::invalid_argument("lexicon entry for '" + ch +
                                  "' has an empty syllable");
    }
  }
  if (entries_.count(ch) == 0) chars_.push_back(ch);
  entries_[ch] = std::move(prons);
}

const std::vector<Pronunciation>* Lexicon::Find(const std::string& ch) const {
  auto it = entries_.find(ch);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::IsPolyphone(const std::string& ch) const {
  const auto* prons = Find(ch);
  return prons != nullptr && prons->size() > 1;
}

size_t Lexicon::num_polyphones() const {
  size_t n = 0;
  for (const auto& [ch, prons] : entries_) n += prons.size() > 1 ? 1 : 0;
  return n;
}

Lexicon Lexicon::FromText(const std::string& text) {
  Lexicon lex;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    auto fields = Split(line, '\t');
    if (fields.size() < 2) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected char and at least one syl:tone");
    }
    std::vector<Pronunciation> prons;
    for (size_t i = 1; i < fields.size(); ++i) {
      auto colon = fields[i].rfind(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 >= fields[i].size()) {
        throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                 ": malformed pronunciation '" + fields[i] + "'");
      }
      Pronunciation p;
      p.syllable = fields[i].substr(0, colon);
      try {
        p.tone = std::stoi(fields[i].substr(colon + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                 ": bad tone in '" + fields[i] + "'");
      }
      prons.push_back(std::move(p));
    }
    try {
      lex.Add(fields[0], std::move(prons));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return lex;
}

Lexicon Lexicon::Load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open lexicon file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return FromText(ss.str());
}

std::string Lexicon::ToText() const {
  std::string out;
  for (const auto& ch : chars_) {
    out += ch;
    for (const auto& p : entries_.at(ch)) {
      out += '\t';
      out += p.syllable;
      out += ':';
      out += std::to_string(p.tone);
    }
    out += '\n';
  }
  return out;
}

void Lexicon::Save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write lexicon file: " + path);
  os << ToText();
  if (!os) throw std::runtime_error("failed writing lexicon file: " + path);
}

std::vector<bool> BuildPolyphoneMask(const std::vector<std::string>& chars,
                                     const Lexicon& lexicon) {
  std::vector<bool> mask(chars.size(), false);
  for (size_t i = 0; i < chars.size(); ++i) {
    mask[i] = lexicon.IsPolyphone(chars[i]);
  }
  return mask;
}

}  // namespace unifront
