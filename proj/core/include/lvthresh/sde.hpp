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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvthresh/model.hpp"
#include "lvthresh/random.hpp"
#include "lvthresh/stationary.hpp"

namespace lv {

struct SimConfig {
  double h = 1e-3;        ///< step size
  double horizon = 1.0;   ///< T
  std::uint64_t seed = 0;
  std::size_t record_stride = 1;
  /// Bound on |log-drift| (1/time); unset means 1/h.
  std::optional<double> taming_cap;

  /// Throws InvalidArgument unless h > 0, T >= h and stride >= 1.
  void validate() const;
  std::size_t steps() const;
  double cap() const { return taming_cap.value_or(1.0 / h); }
};

/// Recorded trajectory. `y`/`log_y` are empty for a boundary path. The log
/// states are the integrator's own variables; `x`, `y` are their exponentials.
struct Path {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> log_x;
  std::vector<double> log_y;
  std::uint64_t seed = 0;
  std::string scheme;

  bool two_dimensional() const noexcept { return !log_y.empty(); }
  std::size_t size() const noexcept { return times.size(); }
};

/// Log-space Euler-Maruyama for one boundary diffusion. Zero noise is
/// allowed (plain logistic ODE). The path draws from stream
/// (cfg.seed, {path_index, noise}).
Path simulate_boundary(const BoundarySpec& spec, double x0,
                       const SimConfig& cfg, std::uint64_t path_index = 0,
                       Noise noise = Noise::B1);

/// Joint log-space Euler-Maruyama for (log X, log Y) driven by the three
/// independent streams B1, B2, B3 of `path_index`. All-zero noise runs the
/// deterministic system.
Path simulate_full(const ModelParams& p, std::array<double, 2> z0,
                   const SimConfig& cfg, std::uint64_t path_index = 0);

/// Single-path integrator behind simulate_full, for drivers that inspect
/// every step (extinction detection) without recording.
class FullSystemStepper {
 public:
  FullSystemStepper(const ModelParams& p, std::array<double, 2> z0,
                    const SimConfig& cfg, std::uint64_t path_index);

  /// Advances by h. Throws NonFiniteState with the step index on overflow.
  void step();

  double log_x() const noexcept { return lx_; }
  double log_y() const noexcept { return ly_; }
  std::size_t steps_taken() const noexcept { return n_; }
  double time() const noexcept { return static_cast<double>(n_) * h_; }

 private:
  ModelParams p_;
  double h_;
  double sqrt_h_;
  double cap_;
  double lx_;
  double ly_;
  std::size_t n_ = 0;
  GaussianStream b1_;
  GaussianStream b2_;
  GaussianStream b3_;
};

std::string scheme_tag(const SimConfig& cfg);

}  // namespace lv
