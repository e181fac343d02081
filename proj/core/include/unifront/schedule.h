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


#ifndef UNIFRONT_SCHEDULE_H_
#define UNIFRONT_SCHEDULE_H_

#include <cstdint>

namespace unifront {

// Scheduled-sampling teacher forcing: 1 up to start_step, then a linear
// decay reaching 0 at start_step + decay_steps.
struct Schedule {
  int64_t start_step = 20000;
  int64_t decay_steps = 50000;

  // Throws std::invalid_argument unless both fields are positive.
  void Validate() const;
};

double TeacherForcingRatio(int64_t step, const Schedule& schedule);

}  // namespace unifront

#endif  // UNIFRONT_SCHEDULE_H_
