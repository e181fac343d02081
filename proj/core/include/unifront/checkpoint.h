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


#ifndef UNIFRONT_CHECKPOINT_H_
#define UNIFRONT_CHECKPOINT_H_

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "unifront/autodiff.h"

namespace unifront {

// Binary container: magic, a JSON header, then named float64 tensors stored
// column-major. Values round-trip bit-exactly; tensor order is preserved.
struct Checkpoint {
  nlohmann::json header = nlohmann::json::object();
  std::vector<std::pair<std::string, Matrix>> tensors;

  void Add(const std::string& name, const Matrix& value);
  const Matrix* Find(const std::string& name) const;

  // Copies every parameter of `store` whose name starts with `prefix`.
  void AddParameters(const ParameterStore& store, const std::string& prefix = "");
  // Loads tensors into matching parameters of `store` restricted to
  // `prefix`. Throws std::runtime_error naming the tensor on a missing entry
  // or shape mismatch.
  void RestoreParameters(ParameterStore* store, const std::string& prefix = "") const;

  void Save(const std::string& path) const;
  std::string Serialize() const;
  // Throws std::runtime_error on a bad magic or truncated file.
  static Checkpoint Load(const std::string& path);
  static Checkpoint Deserialize(const std::string& bytes);
};

}  // namespace unifront

#endif  // UNIFRONT_CHECKPOINT_H_
