// Copyright 2026 The lvthresh Authors
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

#pragma once

#include <cstddef>

#include "lvthresh/analysis.hpp"

namespace lv::detail {

/// Drives a stepper over `steps` steps, scoring the first floor crossing and
/// fitting tail slopes of both log components after `window_start`.
template <class Stepper>
PathOutcome score_path(Stepper& stepper, std::size_t steps, double log_floor,
                       double window_start, std::size_t stride) {
  PathOutcome out;
  SlopeAccumulator sx;
  SlopeAccumulator sy;
  bool decided = false;
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.step();
    if (!decided) {
      const double dx = stepper.log_x() - log_floor;
      const double dy = stepper.log_y() - log_floor;
      if (dx < 0.0 || dy < 0.0) {
        // both below in the same step: the deeper one crossed first
        out.kind = dx <= dy ? PathOutcome::Kind::XExtinct
                            : PathOutcome::Kind::YExtinct;
        decided = true;
      }
    }
    if (k % stride == 0 && stepper.time() >= window_start) {
      sx.add(stepper.time(), stepper.log_x());
      sy.add(stepper.time(), stepper.log_y());
    }
  }
  out.slope_x = sx.slope();
  out.slope_y = sy.slope();
  return out;
}

}  // namespace lv::detail
