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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lvthresh/analysis.hpp"
#include "lvthresh/random.hpp"
#include "lvthresh/sde.hpp"

namespace lv {

/// Lotka-Volterra vector field of one regime:
///   x' = x (a1 - b1 x - c1 y),   y' = y (a2 - b2 y - c2 x).
struct LvRegime {
  std::array<double, 2> a{};
  std::array<double, 2> b{};
  std::array<double, 2> c{};

  friend bool operator==(const LvRegime&, const LvRegime&) = default;
};

/// Two regimes switched by a telegraph chain that leaves regime 1 at rate
/// `alpha` and regime 2 at rate `beta`. Regimes are labelled 1 and 2.
struct PdmpSpec {
  std::array<LvRegime, 2> regimes{};
  double alpha = 1.0;
  double beta = 1.0;

  friend bool operator==(const PdmpSpec&, const PdmpSpec&) = default;
};

/// Throws NonPositiveCoefficient (field like "regime2.c1") or
/// InvalidArgument for non-positive switching rates.
void validate(const PdmpSpec& spec);

/// Exchanges the labels of the two regimes together with (alpha, beta).
PdmpSpec relabel_regimes(const PdmpSpec& spec) noexcept;

struct RegimeJump {
  double time = 0.0;
  int from = 1;
  int to = 2;
  std::array<double, 2> log_z{};  ///< (log x, log y) at the jump
};

struct SwitchedPath {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> log_x;
  std::vector<double> log_y;
  std::vector<int> regime;  ///< active regime on [times[k], times[k+1])
  std::vector<RegimeJump> jumps;
  std::uint64_t seed = 0;
  std::string scheme;

  std::size_t size() const noexcept { return times.size(); }
};

/// Log-coordinate vector field of `r` at (log x, log y).
std::array<double, 2> lv_log_rates(const LvRegime& r,
                                   std::array<double, 2> log_z) noexcept;

/// Classical RK4 for the log-coordinate field of `r` from t0 to t1 in steps
/// of h, the last step shortened to land on t1.
std::array<double, 2> rk4_integrate(const LvRegime& r,
                                    std::array<double, 2> log_z, double t0,
                                    double t1, double h);

/// Advances one switched path on the grid k*h. A jump that falls inside a
/// step is landed on exactly before the step is completed in the new regime.
class PdmpStepper {
 public:
  /// i0 unset draws the initial regime from the chain's stationary law.
  PdmpStepper(const PdmpSpec& spec, std::optional<int> i0,
              std::array<double, 2> z0, const SimConfig& cfg,
              std::uint64_t path_index);

  void step();

  double log_x() const noexcept { return z_[0]; }
  double log_y() const noexcept { return z_[1]; }
  int regime() const noexcept { return regime_; }
  double time() const noexcept { return static_cast<double>(n_) * h_; }
  std::size_t steps_taken() const noexcept { return n_; }
  const std::vector<RegimeJump>& jumps() const noexcept { return jumps_; }

 private:
  double exit_rate() const noexcept;

  PdmpSpec spec_;
  double h_;
  std::array<double, 2> z_;
  int regime_ = 1;
  std::size_t n_ = 0;
  double next_jump_ = 0.0;
  GaussianStream clock_;
  std::vector<RegimeJump> jumps_;
};

/// Records a switched path on the grid k*h*record_stride.
SwitchedPath simulate_pdmp(const PdmpSpec& spec, std::optional<int> i0,
                           std::array<double, 2> z0, const SimConfig& cfg,
                           std::uint64_t path_index = 0);

struct PdmpAverageConfig {
  double horizon = 1e4;
  double h = 1e-2;
  std::uint64_t seed = 0;
  double burn_in = 0.1;     ///< fraction of the horizon discarded
  std::size_t batches = 20;
  double u0 = 1.0;          ///< initial density on the axis
  /// Initial regime; unset draws it from the stationary law.
  std::optional<int> i0;
};

struct BatchEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Time average of obs(regime, u) along the switched boundary system on the
/// axis where only `species` is present. The integral is carried as an extra
/// RK4 state; the standard error comes from batch means and is floored at
/// 1e-12 (1 + |value|).
BatchEstimate pdmp_boundary_average(
    const PdmpSpec& spec, Species species,
    const std::function<double(int, double)>& obs,
    const PdmpAverageConfig& cfg);

struct PdmpLambdas {
  BatchEstimate lambda1;  ///< growth rate of y along the x-axis boundary
  BatchEstimate lambda2;  ///< growth rate of x along the y-axis boundary
};

PdmpLambdas pdmp_boundary_lambdas(const PdmpSpec& spec,
                                  const PdmpAverageConfig& cfg);

/// Extinction bookkeeping of extinction_probabilities over switched paths.
MonteCarloReport pdmp_exclusion_mc(const PdmpSpec& spec,
                                   std::optional<int> i0,
                                   std::array<double, 2> z0,
                                   std::size_t n_paths, const SimConfig& cfg,
                                   double floor = kDefaultFloor,
                                   double window = kDefaultWindow);

/// H0 = max over regimes and species of a/b. Every coordinate of a path
/// that starts in [0, H0]^2 stays there; one that starts outside decays
/// toward it.
double invariant_box_bound(const PdmpSpec& spec) noexcept;

std::string pdmp_scheme_tag(const SimConfig& cfg);

}  // namespace lv
