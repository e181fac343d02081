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

#ifndef UNIFRONT_BUCKETING_H_
#define UNIFRONT_BUCKETING_H_

#include <cstdint>
#include <span>
#include <vector>

namespace unifront {

struct Batch {
  int bucket = 0;                 // index into BucketPlan::upper_bounds
  std::vector<size_t> members;    // indices into the input sequence
};

struct BucketPlan {
  std::vector<int> upper_bounds;
  std::vector<Batch> batches;
  size_t placed = 0;
  size_t dropped = 0;
};

// n_buckets evenly spaced integer bounds whose last element is upper_bound.
std::vector<int> BucketBounds(int n_buckets, int upper_bound);

// Groups sequence indices by length bucket (length in (prev bound, bound]),
// shuffles within each bucket and cuts batches of up to batch_size, then
// shuffles batch order. Sequences longer than upper_bound are dropped and
// counted. Fully determined by `seed`.
BucketPlan BucketBatches(std::span<const int> lengths, int n_buckets,
                         int upper_bound, int batch_size, uint64_t seed);

}  // namespace unifront

#endif  // UNIFRONT_BUCKETING_H_
