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

#include "lvthresh/model.hpp"

#include <cmath>
#include <string>

#include "lvthresh/error.hpp"

namespace lv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::NonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorCode::DegenerateNoise: return "DegenerateNoise";
    case ErrorCode::MixedModeUnsupported: return "MixedModeUnsupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CriticalCase: return "CriticalCase";
    case ErrorCode::NoStationaryDensity: return "NoStationaryDensity";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::MomentDiverges: return "MomentDiverges";
    case ErrorCode::BoundaryExtinct: return "BoundaryExtinct";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::ComponentExtinct: return "ComponentExtinct";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(NoiseMode mode) noexcept {
  switch (mode) {
    case NoiseMode::Deterministic: return "deterministic";
    case NoiseMode::PureQuadratic: return "pure-quadratic";
    case NoiseMode::Linear: return "linear";
  }
  return "unknown";
}

std::string_view to_string(DeterministicCase c) noexcept {
  switch (c) {
    case DeterministicCase::Coexist: return "Coexist";
    case DeterministicCase::YWins: return "YWins";
    case DeterministicCase::XWins: return "XWins";
    case DeterministicCase::Bistable: return "Bistable";
  }
  return "Unknown";
}

namespace {

std::string field_name(const char* base, std::size_t i) {
  return std::string(base) + std::to_string(i + 1);
}

void require_finite(const std::array<double, 2>& v, const char* name) {
  for (std::size_t i = 0; i < 2; ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::NonFiniteCoefficient,
                  field_name(name, i) + " is not finite", field_name(name, i));
    }
  }
}

void require_positive(const std::array<double, 2>& v, const char* name) {
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(v[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveCoefficient,
                  field_name(name, i) + " must be strictly positive (got " +
                      std::to_string(v[i]) + ")",
                  field_name(name, i));
    }
  }
}

}  // namespace

ValidatedParams validate_params(const ModelParams& raw,
                                const ValidationOptions& options) {
  require_finite(raw.a, "a");
  require_finite(raw.b, "b");
  require_finite(raw.c, "c");
  require_finite(raw.alpha, "alpha");
  require_finite(raw.beta, "beta");
  require_finite(raw.gamma, "gamma");
  require_positive(raw.a, "a");
  require_positive(raw.b, "b");
  require_positive(raw.c, "c");

  const bool any_gamma = raw.gamma[0] != 0.0 || raw.gamma[1] != 0.0;
  const bool any_quadratic = raw.alpha[0] != 0.0 || raw.alpha[1] != 0.0 ||
                             raw.beta[0] != 0.0 || raw.beta[1] != 0.0;

  if (any_gamma && any_quadratic) {
    throw Error(ErrorCode::MixedModeUnsupported,
                "linear (gamma) noise combined with quadratic (alpha/beta) "
                "noise is only supported for boundary densities",
                "gamma");
  }
  if (any_gamma) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (raw.gamma[i] == 0.0) {
        throw Error(ErrorCode::DegenerateNoise,
                    "species " + std::to_string(i + 1) +
                        " has no noise while the other carries linear noise",
                    field_name("gamma", i));
      }
    }
    return {raw, NoiseMode::Linear};
  }
  if (any_quadratic) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (raw.alpha[i] == 0.0) {
        throw Error(ErrorCode::DegenerateNoise,
                    "alpha" + std::to_string(i + 1) +
                        " must be nonzero for a non-degenerate diffusion",
                    field_name("alpha", i));
      }
    }
    return {raw, NoiseMode::PureQuadratic};
  }
  if (!options.allow_deterministic) {
    throw Error(ErrorCode::DegenerateNoise,
                "all noise intensities are zero; request deterministic mode "
                "explicitly",
                "alpha1");
  }
  return {raw, NoiseMode::Deterministic};
}

ModelParams swap_species(const ModelParams& p) noexcept {
  auto sw = [](const std::array<double, 2>& v) {
    return std::array<double, 2>{v[1], v[0]};
  };
  return {sw(p.a), sw(p.b), sw(p.c), sw(p.alpha), sw(p.beta), sw(p.gamma)};
}

DeterministicRegime classify_deterministic(const ModelParams& p, double tol) {
  DeterministicRegime r;
  r.lambda1 = p.a[1] - p.c[1] * p.a[0] / p.b[0];
  r.lambda2 = p.a[0] - p.c[0] * p.a[1] / p.b[1];
  if (std::abs(r.lambda1) < tol || std::abs(r.lambda2) < tol) {
    throw Error(ErrorCode::CriticalCase,
                "a deterministic invasion rate is zero; the critical case is "
                "not classified");
  }
  const bool l1 = r.lambda1 > 0.0;
  const bool l2 = r.lambda2 > 0.0;
  if (l1 && l2) {
    r.case_id = DeterministicCase::Coexist;
    // Cramer on b1 x + c1 y = a1, c2 x + b2 y = a2.
    const double det = p.b[0] * p.b[1] - p.c[0] * p.c[1];
    r.equilibrium = std::array<double, 2>{
        (p.a[0] * p.b[1] - p.c[0] * p.a[1]) / det,
        (p.b[0] * p.a[1] - p.c[1] * p.a[0]) / det};
  } else if (l1) {
    r.case_id = DeterministicCase::YWins;
  } else if (l2) {
    r.case_id = DeterministicCase::XWins;
  } else {
    r.case_id = DeterministicCase::Bistable;
  }
  return r;
}

}  // namespace lv
