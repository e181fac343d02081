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

#ifndef UNIFRONT_EMBEDDING_H_
#define UNIFRONT_EMBEDDING_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "unifront/vocab.h"

namespace unifront {

// Pre-trained character vectors. Lookup never fails: characters outside the
// table get `unk_vector`, the mean of all loaded vectors.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim = 300);

  // word2vec text format: header "count dim", then "char v1 ... vdim".
  // Throws if the header dimension differs from `dim`. Duplicate characters
  // keep the last vector.
  static EmbeddingTable Load(const std::string& path, int dim);
  void Save(const std::string& path) const;

  // Deterministic Gaussian vectors for the given characters.
  static EmbeddingTable Random(const std::vector<std::string>& chars, int dim,
                               uint64_t seed);

  void Set(const std::string& ch, const Eigen::VectorXd& vec);
  const Eigen::VectorXd& Lookup(const std::string& ch) const;
  bool Contains(const std::string& ch) const { return vectors_.count(ch) > 0; }

  int dim() const { return dim_; }
  size_t size() const { return order_.size(); }
  const Eigen::VectorXd& unk_vector() const { return unk_; }

  // Row i holds the vector for vocab.chars symbol i (reserved ids and
  // unknown characters get unk_vector).
  Eigen::MatrixXd ToMatrix(const SymbolTable& chars) const;

 private:
  void RecomputeUnk();

  int dim_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
  Eigen::VectorXd unk_;
};

}  // namespace unifront

#endif  // UNIFRONT_EMBEDDING_H_
