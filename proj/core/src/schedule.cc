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


#include "unifront/schedule.h"

#include <stdexcept>

namespace unifront {

void Schedule::Validate() const {
  if (start_step <= 0 || decay_steps <= 0) {
    throw std::invalid_argument("schedule: start_step and decay_steps must be positive");
  }
}

double TeacherForcingRatio(int64_t step, const Schedule& schedule) {
  if (step <= schedule.start_step) return 1.0;
  const int64_t elapsed = step - schedule.start_step;
  if (elapsed >= schedule.decay_steps) return 0.0;
  return 1.0 - static_cast<double>(elapsed) / static_cast<double>(schedule.decay_steps);
}

}  // namespace unifront
