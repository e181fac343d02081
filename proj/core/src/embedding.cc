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

#include "unifront/embedding.h"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <glog/logging.h>

#include "unifront/text_util.h"

namespace unifront {

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim), unk_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) throw std::invalid_argument("embedding dim must be positive");
}

void EmbeddingTable::Set(const std::string& ch, const Eigen::VectorXd& vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("embedding for '" + ch + "' has length " +
                                std::to_string(vec.size()) + ", expected " +
                                std::to_string(dim_));
  }
  if (vectors_.count(ch) == 0) order_.push_back(ch);
  vectors_[ch] = vec;
  RecomputeUnk();
}

void EmbeddingTable::RecomputeUnk() {
  unk_ = Eigen::VectorXd::Zero(dim_);
  if (order_.empty()) return;
  for (const auto& ch : order_) unk_ += vectors_.at(ch);
  unk_ /= static_cast<double>(order_.size());
}

const Eigen::VectorXd& EmbeddingTable::Lookup(const std::string& ch) const {
  auto it = vectors_.find(ch);
  return it == vectors_.end() ? unk_ : it->second;
}

EmbeddingTable EmbeddingTable::Load(const std::string& path, int dim) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open embedding file: " + path);
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error(path + ": missing word2vec header");
  }
  auto header = SplitWhitespace(line);
  if (header.size() != 2) {
    throw std::runtime_error(path + ": header must be \"count dim\"");
  }
  const long count = std::stol(header[0]);
  const int file_dim = std::stoi(header[1]);
  if (file_dim != dim) {
    throw std::runtime_error(path + ": header dim " + std::to_string(file_dim) +
                             " does not match requested dim " +
                             std::to_string(dim));
  }
  EmbeddingTable table(dim);
  int line_no = 1;
  long loaded = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(dim + 1) +
                               " fields, got " + std::to_string(fields.size()));
    }
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v(k) = std::stod(fields[k + 1]);
    if (table.Contains(fields[0])) {
      LOG(WARNING) << path << ":" << line_no << ": duplicate entry for '"
                   << fields[0] << "', keeping the last one";
    } else {
      table.order_.push_back(fields[0]);
    }
    table.vectors_[fields[0]] = std::move(v);
    ++loaded;
  }
  if (loaded != count) {
    LOG(WARNING) << path << ": header announces " << count << " vectors, read "
                 << loaded;
  }
  table.RecomputeUnk();
  return table;
}

void EmbeddingTable::Save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write embedding file: " + path);
  os << order_.size() << ' ' << dim_ << '\n';
  for (const auto& ch : order_) {
    os << ch;
    const auto& v = vectors_.at(ch);
    for (int k = 0; k < dim_; ++k) os << ' ' << FormatFixed(v(k), 6);
    os << '\n';
  }
  if (!os) throw std::runtime_error("failed writing embedding file: " + path);
}

EmbeddingTable EmbeddingTable::Random(const std::vector<std::string>& chars,
                                      int dim, uint64_t seed) {
  EmbeddingTable table(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(dim));
  for (const auto& ch : chars) {
    if (table.Contains(ch)) continue;
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v(k) = dist(rng);
    table.order_.push_back(ch);
    table.vectors_[ch] = std::move(v);
  }
  table.RecomputeUnk();
  return table;
}

Eigen::MatrixXd EmbeddingTable::ToMatrix(const SymbolTable& chars) const {
  Eigen::MatrixXd m(chars.size(), dim_);
  for (int i = 0; i < chars.size(); ++i) {
    m.row(i) = i < SymbolTable::kNumReserved ? unk_.transpose()
                                             : Lookup(chars.Symbol(i)).transpose();
  }
  return m;
}

}  // namespace unifront
