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


#ifndef UNIFRONT_HASH_H_
#define UNIFRONT_HASH_H_

#include <string>
#include <string_view>

namespace unifront {

// SHA-1 of "blob <size>\0<data>" in lowercase hex, as `git hash-object`.
std::string GitBlobSha1(std::string_view data);

// Throws std::runtime_error if the file cannot be read.
std::string GitBlobSha1File(const std::string& path);

std::string ReadFile(const std::string& path);

}  // namespace unifront

#endif  // UNIFRONT_HASH_H_
