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

#ifndef UNIFRONT_VOCAB_H_
#define UNIFRONT_VOCAB_H_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace unifront {

// Bidirectional symbol <-> index map. Ids 0..2 are reserved in every table.
class SymbolTable {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kGo = 2;
  static constexpr int kNumReserved = 3;

  SymbolTable();
  explicit SymbolTable(const std::vector<std::string>& symbols);

  // Returns the id of `symbol`, inserting it if new.
  int Add(const std::string& symbol);
  // Unknown symbols map to kUnk.
  int Id(const std::string& symbol) const;
  std::optional<int> Find(const std::string& symbol) const;
  bool Contains(const std::string& symbol) const;
  // Throws std::out_of_range for ids outside the table.
  const std::string& Symbol(int id) const;

  int size() const { return static_cast<int>(symbols_.size()); }
  // Number of non-reserved symbols.
  int num_symbols() const { return size() - kNumReserved; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const SymbolTable& other) const {
    return symbols_ == other.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> ids_;
};

// One table per label family.
struct VocabSet {
  SymbolTable chars;
  SymbolTable cws;
  SymbolTable pos;
  SymbolTable phonemes;
  SymbolTable tones;
  SymbolTable prosody;
  // Head width for POS: reserved ids plus the configured tag-set size.
  int pos_capacity = SymbolTable::kNumReserved + 99;

  // cws, tones and prosody are filled with their fixed alphabets.
  static VocabSet Create(int pos_tagset_size = 99);

  nlohmann::json ToJson() const;
  static VocabSet FromJson(const nlohmann::json& j);

  bool operator==(const VocabSet& other) const = default;
};

}  // namespace unifront

#endif  // UNIFRONT_VOCAB_H_
