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

#ifndef UNIFRONT_TEXT_UTIL_H_
#define UNIFRONT_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace unifront {

// Splits UTF-8 text into code points, each returned as its byte sequence.
// Throws std::invalid_argument on malformed UTF-8.
std::vector<std::string> SplitUtf8(std::string_view text);

std::string JoinChars(const std::vector<std::string>& chars);

std::vector<std::string> SplitWhitespace(std::string_view text);

std::vector<std::string> Split(std::string_view text, char delim);

std::string Trim(std::string_view text);

// Shortest round-trip decimal representation.
std::string FormatDouble(double value);

// Fixed-precision representation used by text artifacts.
std::string FormatFixed(double value, int precision);

}  // namespace unifront

#endif  // UNIFRONT_TEXT_UTIL_H_
