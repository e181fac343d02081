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

#include "unifront/bucketing.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include <glog/logging.h>

namespace unifront {

std::vector<int> BucketBounds(int n_buckets, int upper_bound) {
  if (n_buckets < 1) throw std::invalid_argument("n_buckets must be >= 1");
  if (upper_bound < n_buckets) {
    throw std::invalid_argument("upper_bound must be >= n_buckets");
  }
  std::vector<int> bounds(n_buckets);
  for (int i = 0; i < n_buckets; ++i) {
    // ceil((i + 1) * upper_bound / n_buckets)
    bounds[i] = static_cast<int>(
        (static_cast<int64_t>(i + 1) * upper_bound + n_buckets - 1) / n_buckets);
  }
  return bounds;
}

BucketPlan BucketBatches(std::span<const int> lengths, int n_buckets,
                         int upper_bound, int batch_size, uint64_t seed) {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  BucketPlan plan;
  plan.upper_bounds = BucketBounds(n_buckets, upper_bound);
  std::vector<std::vector<size_t>> buckets(n_buckets);
  for (size_t i = 0; i < lengths.size(); ++i) {
    auto it = std::lower_bound(plan.upper_bounds.begin(),
                               plan.upper_bounds.end(), lengths[i]);
    if (it == plan.upper_bounds.end()) {
      ++plan.dropped;
      continue;
    }
    buckets[it - plan.upper_bounds.begin()].push_back(i);
    ++plan.placed;
  }
  if (plan.dropped > 0) {
    LOG(INFO) << "bucketing dropped " << plan.dropped
              << " sequences longer than " << upper_bound;
  }
  std::mt19937_64 rng(seed);
  for (int b = 0; b < n_buckets; ++b) {
    auto& members = buckets[b];
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t start = 0; start < members.size(); start += batch_size) {
      size_t end = std::min(members.size(), start + batch_size);
      plan.batches.push_back(
          Batch{b, std::vector<size_t>(members.begin() + start, members.begin() + end)});
    }
  }
  std::shuffle(plan.batches.begin(), plan.batches.end(), rng);
  return plan;
}

}  // namespace unifront
