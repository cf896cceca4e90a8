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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvthresh/model.hpp"
#include "lvthresh/quadrature.hpp"

namespace lv {

/// One-species boundary diffusion
///   dphi = phi (a - b phi) dt + (gamma phi + alpha phi^2) dB.
struct BoundarySpec {
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
};

/// Boundary diffusion of `species` when the other species is absent.
BoundarySpec boundary_spec(const ModelParams& p, Species species) noexcept;

/// Throws InvalidArgument for a,b <= 0, zero noise or a sign change of the
/// diffusion coefficient inside (0, inf); NoStationaryDensity when alpha = 0
/// and a - gamma^2/2 <= 0.
void validate(const BoundarySpec& spec);

inline constexpr double kDefaultTolerance = 1e-10;

/// Asymptotic slopes of log(phi * f(phi)) against log(phi) at phi -> 0 and
/// phi -> inf. Q_p is finite iff at_zero + p > 0 and at_infinity + p < 0.
struct TailExponents {
  double at_zero = 0.0;
  double at_infinity = 0.0;
};

/// Normalized stationary density of a BoundarySpec, built from the speed
/// density m(phi) = sigma(phi)^-2 exp(int_{phi_ref}^{phi} 2 mu / sigma^2)
/// with the exponent integrated numerically. Immutable after construction.
class StationaryDensity {
 public:
  StationaryDensity(const BoundarySpec& spec, double tol);

  const BoundarySpec& spec() const noexcept { return spec_; }
  double tolerance() const noexcept { return tol_; }

  double operator()(double phi) const;
  double log_density(double phi) const;
  double cdf(double phi) const;

  /// c* such that f(phi) = c* m(phi), m anchored at reference_point().
  double normalizing_constant() const noexcept;
  /// Mode of the density of log(phi); the anchor of the speed exponent.
  double reference_point() const noexcept;
  /// Truncation bounds in phi used by the normalization quadrature.
  std::pair<double, double> truncation() const noexcept;
  /// Residual of the normalization quadrature.
  double normalization_error() const noexcept { return norm_error_; }
  TailExponents tail() const;

  /// int h(phi) f(phi) dphi over the truncated support, in log(phi).
  template <class H>
  quadrature::Result expectation(H&& h) const {
    auto integrand = [&](double s) {
      return h(std::exp(s)) * std::exp(log_g(s) - log_z_);
    };
    return quadrature::integrate(integrand, s_lo_, s_hi_,
                                 {tol_, 0.0, initial_panels_, 16});
  }

  /// log of the unnormalized density of s = log(phi), anchored so that
  /// log_g(reference) = 0. Exposed for quadrature in log coordinates.
  double log_g(double s) const;
  /// d/ds log_g(s) in closed form of the drift/diffusion pair.
  double dlog_g(double s) const;

 private:
  double exponent(double s) const;
  double exponent_rate(double r) const;

  BoundarySpec spec_;
  double tol_;
  double s_ref_ = 0.0;
  double knot_step_ = 0.25;
  std::vector<double> knots_;  // exponent at s_ref_ + (k - origin_) * step
  std::ptrdiff_t origin_ = 0;
  double s_lo_ = 0.0;
  double s_hi_ = 0.0;
  double log_z_ = 0.0;
  double norm_error_ = 0.0;
  std::size_t initial_panels_ = 8;
  std::vector<double> cdf_edges_;   // panel edges in s
  std::vector<double> cdf_values_;  // cumulative mass at each edge
};

StationaryDensity stationary_density(const BoundarySpec& spec,
                                     double tol = kDefaultTolerance);

struct MomentEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Q_p = int phi^p f(phi) dphi. Throws MomentDiverges outside the
/// integrability range given by tail(). For gamma = 0 the integral is taken
/// in u = 1/phi with the closed-form exponent; otherwise in log(phi) against
/// the numerically integrated speed density.
MomentEstimate moment(const StationaryDensity& d, double p);

namespace detail {
/// Generic log(phi) route, used for gamma != 0 and as a cross-check.
MomentEstimate moment_speed_density(const StationaryDensity& d, double p);
/// Closed-form route for gamma = 0.
MomentEstimate moment_closed_form(const BoundarySpec& spec, double p,
                                  double tol);
}  // namespace detail

struct ThresholdEstimate {
  double value = 0.0;
  /// Quadrature residuals propagated linearly through a - c Q1 - beta^2/2 Q2.
  double error = 0.0;
};

/// Average per-capita growth rate of Y against X's boundary density,
/// a2 - c2 Q1 - (beta2^2/2) Q2.
ThresholdEstimate lambda1(const ModelParams& p, double tol = kDefaultTolerance);
/// Mirror of lambda1: a1 - c1 Q1' - (beta1^2/2) Q2' against Y's density.
ThresholdEstimate lambda2(const ModelParams& p, double tol = kDefaultTolerance);

/// Closed-form thresholds for linear noise (alpha = beta = 0):
///   l1 = a2 - (c2/b1)(a1 - gamma1^2/2),  l2 = a1 - (c1/b2)(a2 - gamma2^2/2).
/// Throws BoundaryExtinct (field "1" or "2") when a_i - gamma_i^2/2 <= 0.
std::array<double, 2> lambda_linear(const ModelParams& p);

enum class StochasticRegime {
  Coexist,
  YDiesXPersists,
  XDiesYPersists,
  BistableExclusion,
  BothExtinct,
  Unclassified,
};

std::string_view to_string(StochasticRegime r) noexcept;

struct RegimeReport {
  NoiseMode mode = NoiseMode::PureQuadratic;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda1_error = 0.0;
  double lambda2_error = 0.0;
  /// a_i - gamma_i^2/2, filled in linear mode only.
  std::optional<std::array<double, 2>> boundary_growth;
  StochasticRegime regime = StochasticRegime::Unclassified;
  /// Which criterion decided the regime (e.g. "coexistence").
  std::string basis;
};

/// Full stochastic classification. A threshold within max(tol, its error
/// bound) of zero yields regime Unclassified with basis "critical".
RegimeReport classify_stochastic(const ModelParams& p,
                                 double tol = kDefaultTolerance);

}  // namespace lv
