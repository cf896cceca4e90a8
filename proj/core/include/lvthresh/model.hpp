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
#include <optional>
#include <string_view>

namespace lv {

/// Species index. Arrays in ModelParams are ordered (X, Y).
enum class Species { X = 0, Y = 1 };

constexpr std::size_t index(Species s) noexcept {
  return static_cast<std::size_t>(s);
}
constexpr Species other(Species s) noexcept {
  return s == Species::X ? Species::Y : Species::X;
}

/// Coefficients of the two-species competitive system
///
///   dX = X(a1 - b1 X - c1 Y) dt + (alpha1 X^2 + gamma1 X) dB1 + beta1 X Y dB2
///   dY = Y(a2 - b2 Y - c2 X) dt + (alpha2 Y^2 + gamma2 Y) dB3 + beta2 X Y dB2
///
/// with B1, B2, B3 independent. Element 0 belongs to X, element 1 to Y.
struct ModelParams {
  std::array<double, 2> a{};      ///< intrinsic growth rates
  std::array<double, 2> b{};      ///< intra-specific competition
  std::array<double, 2> c{};      ///< inter-specific competition
  std::array<double, 2> alpha{};  ///< quadratic noise intensities
  std::array<double, 2> beta{};   ///< cross-term noise intensities
  std::array<double, 2> gamma{};  ///< linear noise intensities

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Which shape of noise a parameter set carries.
enum class NoiseMode {
  Deterministic,  ///< every noise intensity is zero
  PureQuadratic,  ///< gamma = 0, alpha != 0 for both species
  Linear,         ///< alpha = beta = 0, gamma != 0 for both species
};

std::string_view to_string(NoiseMode mode) noexcept;

struct ValidationOptions {
  /// Accept all-zero noise instead of raising DegenerateNoise.
  bool allow_deterministic = false;
};

struct ValidatedParams {
  ModelParams params;
  NoiseMode mode = NoiseMode::PureQuadratic;
};

/// Checks positivity/finiteness and classifies the noise mode. Throws
/// lv::Error with NonPositiveCoefficient, NonFiniteCoefficient,
/// DegenerateNoise or MixedModeUnsupported; the error's field() names the
/// offending coefficient (e.g. "b1") or species ("alpha2").
ValidatedParams validate_params(const ModelParams& raw,
                                const ValidationOptions& options = {});

/// Exchanges the roles of X and Y.
ModelParams swap_species(const ModelParams& p) noexcept;

enum class DeterministicCase { Coexist, YWins, XWins, Bistable };

std::string_view to_string(DeterministicCase c) noexcept;

struct DeterministicRegime {
  double lambda1 = 0.0;  ///< invasion rate of Y at X's equilibrium a1/b1
  double lambda2 = 0.0;  ///< invasion rate of X at Y's equilibrium a2/b2
  DeterministicCase case_id = DeterministicCase::Coexist;
  /// Interior equilibrium, present only for Coexist.
  std::optional<std::array<double, 2>> equilibrium;
};

inline constexpr double kCriticalTolerance = 1e-12;

/// Sign classification of the noiseless system. Noise fields are ignored.
/// Throws CriticalCase when either rate is within `tol` of zero.
DeterministicRegime classify_deterministic(const ModelParams& p,
                                           double tol = kCriticalTolerance);

}  // namespace lv
