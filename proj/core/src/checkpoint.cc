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


#include "unifront/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace unifront {

namespace {

constexpr char kMagic[8] = {'U', 'N', 'I', 'F', 'C', 'K', 'P', '1'};

template <typename T>
void Put(std::string* out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out->append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T Get() {
    T v;
    std::memcpy(&v, Take(sizeof(T)), sizeof(T));
    return v;
  }
  const char* Take(size_t n) {
    if (n > bytes_.size() - pos_) throw std::runtime_error("checkpoint: truncated data");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace

void Checkpoint::Add(const std::string& name, const Matrix& value) {
  tensors.emplace_back(name, value);
}

const Matrix* Checkpoint::Find(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return &m;
  }
  return nullptr;
}

void Checkpoint::AddParameters(const ParameterStore& store, const std::string& prefix) {
  for (size_t i = 0; i < store.size(); ++i) {
    const Parameter& p = store.at(i);
    if (p.name().starts_with(prefix)) Add(p.name(), p.value());
  }
}

void Checkpoint::RestoreParameters(ParameterStore* store, const std::string& prefix) const {
  for (size_t i = 0; i < store->size(); ++i) {
    Parameter& p = store->at(i);
    if (!p.name().starts_with(prefix)) continue;
    const Matrix* m = Find(p.name());
    if (m == nullptr) throw std::runtime_error("checkpoint: missing tensor '" + p.name() + "'");
    if (m->rows() != p.value().rows() || m->cols() != p.value().cols()) {
      throw std::runtime_error(
          "checkpoint: tensor '" + p.name() + "' is " + std::to_string(m->rows()) +
          " x " + std::to_string(m->cols()) + ", model expects " +
          std::to_string(p.value().rows()) + " x " + std::to_string(p.value().cols()));
    }
    p.value() = *m;
  }
}

std::string Checkpoint::Serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  const std::string head = header.dump();
  Put<uint64_t>(&out, head.size());
  out += head;
  Put<uint64_t>(&out, tensors.size());
  for (const auto& [name, m] : tensors) {
    Put<uint32_t>(&out, static_cast<uint32_t>(name.size()));
    out += name;
    Put<int64_t>(&out, m.rows());
    Put<int64_t>(&out, m.cols());
    out.append(reinterpret_cast<const char*>(m.data()), sizeof(double) * m.size());
  }
  return out;
}

Checkpoint Checkpoint::Deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  Reader r(bytes);
  r.Take(sizeof(kMagic));
  Checkpoint ckpt;
  const auto head_len = r.Get<uint64_t>();
  const char* head = r.Take(head_len);
  ckpt.header = nlohmann::json::parse(head, head + head_len);
  const auto count = r.Get<uint64_t>();
  for (uint64_t i = 0; i < count; ++i) {
    const auto name_len = r.Get<uint32_t>();
    std::string name(r.Take(name_len), name_len);
    const auto rows = r.Get<int64_t>();
    const auto cols = r.Get<int64_t>();
    if (rows < 0 || cols < 0) throw std::runtime_error("checkpoint: bad shape for " + name);
    Matrix m(rows, cols);
    std::memcpy(m.data(), r.Take(sizeof(double) * m.size()), sizeof(double) * m.size());
    ckpt.tensors.emplace_back(std::move(name), std::move(m));
  }
  if (!r.done()) throw std::runtime_error("checkpoint: trailing bytes");
  return ckpt;
}

void Checkpoint::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::string bytes = Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint Checkpoint::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return Deserialize(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace unifront
