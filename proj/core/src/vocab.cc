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

#include "unifront/vocab.h"

#include <stdexcept>

namespace unifront {

SymbolTable::SymbolTable() : SymbolTable(std::vector<std::string>{}) {}

SymbolTable::SymbolTable(const std::vector<std::string>& symbols) {
  for (const char* reserved : {"<pad>", "<unk>", "<go>"}) Add(reserved);
  for (const auto& s : symbols) Add(s);
}

int SymbolTable::Add(const std::string& symbol) {
  auto it = ids_.find(symbol);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(symbols_.size());
  symbols_.push_back(symbol);
  ids_.emplace(symbol, id);
  return id;
}

int SymbolTable::Id(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  return it == ids_.end() ? kUnk : it->second;
}

std::optional<int> SymbolTable::Find(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool SymbolTable::Contains(const std::string& symbol) const {
  return ids_.count(symbol) > 0;
}

const std::string& SymbolTable::Symbol(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("symbol id " + std::to_string(id) +
                            " outside table of size " + std::to_string(size()));
  }
  return symbols_[id];
}

VocabSet VocabSet::Create(int pos_tagset_size) {
  if (pos_tagset_size < 1) {
    throw std::invalid_argument("POS tag-set size must be positive");
  }
  VocabSet v;
  v.cws = SymbolTable({"B", "M", "E", "S"});
  v.tones = SymbolTable({"1", "2", "3", "4", "5"});
  v.prosody = SymbolTable({"0", "1", "2", "3"});
  v.pos_capacity = SymbolTable::kNumReserved + pos_tagset_size;
  return v;
}

namespace {

std::vector<std::string> UserSymbols(const SymbolTable& t) {
  return {t.symbols().begin() + SymbolTable::kNumReserved, t.symbols().end()};
}

}  // namespace

nlohmann::json VocabSet::ToJson() const {
  return nlohmann::json{{"chars", UserSymbols(chars)},
                        {"cws", UserSymbols(cws)},
                        {"pos", UserSymbols(pos)},
                        {"phonemes", UserSymbols(phonemes)},
                        {"tones", UserSymbols(tones)},
                        {"prosody", UserSymbols(prosody)},
                        {"pos_capacity", pos_capacity}};
}

VocabSet VocabSet::FromJson(const nlohmann::json& j) {
  VocabSet v;
  v.chars = SymbolTable(j.at("chars").get<std::vector<std::string>>());
  v.cws = SymbolTable(j.at("cws").get<std::vector<std::string>>());
  v.pos = SymbolTable(j.at("pos").get<std::vector<std::string>>());
  v.phonemes = SymbolTable(j.at("phonemes").get<std::vector<std::string>>());
  v.tones = SymbolTable(j.at("tones").get<std::vector<std::string>>());
  v.prosody = SymbolTable(j.at("prosody").get<std::vector<std::string>>());
  v.pos_capacity = j.at("pos_capacity").get<int>();
  if (v.pos.size() > v.pos_capacity) {
    throw std::invalid_argument("POS table exceeds its configured capacity");
  }
  return v;
}

}  // namespace unifront
