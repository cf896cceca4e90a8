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

#include "lvthresh/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lvthresh/error.hpp"

namespace lv {

namespace {

constexpr double kTruncationDrop = 40.0;  // nats below the peak
constexpr double kTableDrop = 60.0;
constexpr double kLogLimit = 600.0;       // |log phi| never exceeds this
constexpr double kTailProbe = 60.0;
constexpr double kTailMargin = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kNegInf : v; }

std::size_t panels_for(double width, double target) {
  const double n = std::ceil(width / target);
  return static_cast<std::size_t>(std::clamp(n, 8.0, 1024.0));
}

/// Bisection for a sign change of a decreasing-through-zero function.
template <class F>
double find_root(F&& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo > 0.0) || !(fhi < 0.0)) {
    throw Error(ErrorCode::QuadratureFailure,
                "could not bracket the peak of the integrand");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BoundarySpec boundary_spec(const ModelParams& p, Species species) noexcept {
  const std::size_t i = index(species);
  return {p.a[i], p.b[i], p.alpha[i], p.gamma[i]};
}

void validate(const BoundarySpec& spec) {
  if (!(spec.a > 0.0) || !(spec.b > 0.0) || !std::isfinite(spec.a) ||
      !std::isfinite(spec.b)) {
    throw Error(ErrorCode::InvalidArgument,
                "boundary spec needs finite a > 0 and b > 0");
  }
  if (!std::isfinite(spec.alpha) || !std::isfinite(spec.gamma)) {
    throw Error(ErrorCode::InvalidArgument, "noise intensities must be finite");
  }
  if (spec.alpha == 0.0 && spec.gamma == 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "boundary spec has no noise; the stationary law is a point mass");
  }
  if (spec.alpha != 0.0 && spec.gamma != 0.0 &&
      (spec.alpha > 0.0) != (spec.gamma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "diffusion coefficient vanishes at phi = -gamma/alpha > 0");
  }
  if (spec.gamma != 0.0 && !(spec.a - 0.5 * spec.gamma * spec.gamma > 0.0)) {
    throw Error(ErrorCode::NoStationaryDensity,
                "a - gamma^2/2 <= 0: the boundary diffusion converges to 0");
  }
}

// ---------------------------------------------------------------------------
// StationaryDensity

double StationaryDensity::exponent_rate(double r) const {
  const double er = std::exp(r);
  const double sig = spec_.gamma + spec_.alpha * er;
  return 2.0 * (spec_.a - spec_.b * er) / (sig * sig);
}

double StationaryDensity::dlog_g(double s) const {
  const double es = std::exp(s);
  const double sig = spec_.gamma + spec_.alpha * es;
  return -1.0 - 2.0 * spec_.alpha * es / sig + exponent_rate(s);
}

double StationaryDensity::exponent(double s) const {
  auto rate = [this](double r) { return exponent_rate(r); };
  if (knots_.empty()) {
    return quadrature::composite(
        rate, s_ref_, s,
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(std::abs(s - s_ref_) / knot_step_))));
  }
  const auto last = static_cast<std::ptrdiff_t>(knots_.size()) - 1;
  auto k = static_cast<std::ptrdiff_t>(std::floor((s - s_ref_) / knot_step_)) +
           origin_;
  k = std::clamp<std::ptrdiff_t>(k, 0, last);
  const double sk =
      s_ref_ + static_cast<double>(k - origin_) * knot_step_;
  const double span = std::abs(s - sk);
  const auto n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(span / 0.25)));
  return knots_[static_cast<std::size_t>(k)] + quadrature::composite(rate, sk, s, n);
}

double StationaryDensity::log_g(double s) const {
  const double sig = std::abs(spec_.gamma + spec_.alpha * std::exp(s));
  const double sig_ref = std::abs(spec_.gamma + spec_.alpha * std::exp(s_ref_));
  // -s - 2 log|sigma(phi)/phi| + exponent, shifted so log_g(s_ref) = 0
  return sanitize(-(s - s_ref_) - 2.0 * (std::log(sig) - std::log(sig_ref)) +
                  exponent(s));
}

StationaryDensity::StationaryDensity(const BoundarySpec& spec, double tol)
    : spec_(spec), tol_(tol) {
  validate(spec_);
  if (!(tol_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  }

  // Peak of the density of log(phi). dlog_g runs from positive to negative.
  s_ref_ = find_root([this](double s) { return dlog_g(s); }, -kTailProbe,
                     kTailProbe);

  // Width of the peak sets the knot spacing.
  {
    const double h = 1e-4 * (1.0 + std::abs(s_ref_));
    const double curvature =
        -(dlog_g(s_ref_ + h) - dlog_g(s_ref_ - h)) / (2.0 * h);
    const double width = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 1.0;
    knot_step_ = std::clamp(0.25 * width, 1e-6, 0.25);
  }

  // Exponent table outward from the peak until the density is negligible.
  auto rate = [this](double r) { return exponent_rate(r); };
  std::vector<double> right{0.0};
  std::vector<double> left{0.0};
  auto log_g_raw = [&](double s, double expo) {
    const double sig = std::abs(spec_.gamma + spec_.alpha * std::exp(s));
    const double sig_ref =
        std::abs(spec_.gamma + spec_.alpha * std::exp(s_ref_));
    return sanitize(-(s - s_ref_) - 2.0 * (std::log(sig) - std::log(sig_ref)) +
                    expo);
  };
  for (double s = s_ref_; s < kLogLimit;) {
    const double next = s + knot_step_;
    right.push_back(right.back() + quadrature::panel(rate, s, next));
    s = next;
    if (log_g_raw(s, right.back()) < -kTableDrop || right.size() > 200000) break;
  }
  for (double s = s_ref_; s > -kLogLimit;) {
    const double next = s - knot_step_;
    left.push_back(left.back() - quadrature::panel(rate, next, s));
    s = next;
    if (log_g_raw(s, left.back()) < -kTableDrop || left.size() > 200000) break;
  }
  origin_ = static_cast<std::ptrdiff_t>(left.size()) - 1;
  knots_.assign(left.rbegin(), left.rend());
  knots_.insert(knots_.end(), right.begin() + 1, right.end());

  auto lg = [this](double s) { return log_g(s); };
  const double probe = 4.0 * knot_step_;
  s_lo_ = quadrature::drop_point(lg, s_ref_, -kLogLimit, kTruncationDrop, probe);
  s_hi_ = quadrature::drop_point(lg, s_ref_, kLogLimit, kTruncationDrop, probe);

  initial_panels_ = panels_for(s_hi_ - s_lo_, 16.0 * knot_step_);
  auto g = [this](double s) { return std::exp(log_g(s)); };
  const auto z = quadrature::integrate(g, s_lo_, s_hi_,
                                       {tol_, 0.0, initial_panels_, 16});
  if (!(z.value > 0.0)) {
    throw Error(ErrorCode::QuadratureFailure,
                "normalization integral is not positive");
  }
  log_z_ = std::log(z.value);
  norm_error_ = z.error / z.value;

  // Cumulative mass on the converged panel layout.
  const std::size_t n = z.panels;
  const double width = (s_hi_ - s_lo_) / static_cast<double>(n);
  cdf_edges_.resize(n + 1);
  cdf_values_.resize(n + 1);
  cdf_edges_[0] = s_lo_;
  cdf_values_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = cdf_edges_[i];
    const double r = (i + 1 == n) ? s_hi_ : s_lo_ + width * static_cast<double>(i + 1);
    cdf_edges_[i + 1] = r;
    cdf_values_[i + 1] = cdf_values_[i] + quadrature::panel(g, l, r);
  }
  const double total = cdf_values_.back();
  for (double& v : cdf_values_) v /= total;
}

double StationaryDensity::log_density(double phi) const {
  if (!(phi > 0.0)) return kNegInf;
  const double s = std::log(phi);
  return log_g(s) - log_z_ - s;
}

double StationaryDensity::operator()(double phi) const {
  return std::exp(log_density(phi));
}

double StationaryDensity::cdf(double phi) const {
  if (!(phi > 0.0)) return 0.0;
  const double s = std::log(phi);
  if (s <= s_lo_) return 0.0;
  if (s >= s_hi_) return 1.0;
  const auto it = std::upper_bound(cdf_edges_.begin(), cdf_edges_.end(), s);
  const auto i = static_cast<std::size_t>(it - cdf_edges_.begin()) - 1;
  auto g = [this](double x) { return std::exp(log_g(x) - log_z_); };
  const double partial = quadrature::panel(g, cdf_edges_[i], s);
  // rescale the partial panel onto the cumulative table's normalization
  const double full = quadrature::panel(g, cdf_edges_[i], cdf_edges_[i + 1]);
  const double frac = full > 0.0 ? partial / full : 0.0;
  return std::clamp(
      cdf_values_[i] + frac * (cdf_values_[i + 1] - cdf_values_[i]), 0.0, 1.0);
}

double StationaryDensity::normalizing_constant() const noexcept {
  return std::exp(-log_z_);
}

double StationaryDensity::reference_point() const noexcept {
  return std::exp(s_ref_);
}

std::pair<double, double> StationaryDensity::truncation() const noexcept {
  return {std::exp(s_lo_), std::exp(s_hi_)};
}

TailExponents StationaryDensity::tail() const {
  // dlog_g at a far probe approximates the asymptotic slope; for gamma = 0
  // the slope at 0 is unbounded and the probe returns a huge positive value.
  return {dlog_g(-kTailProbe), dlog_g(kTailProbe)};
}

StationaryDensity stationary_density(const BoundarySpec& spec, double tol) {
  return StationaryDensity(spec, tol);
}

// ---------------------------------------------------------------------------
// Moments

namespace {

void require_integrable(const TailExponents& t, double p) {
  if (!(t.at_zero + p > kTailMargin) || !(t.at_infinity + p < -kTailMargin)) {
    throw Error(ErrorCode::MomentDiverges,
                "moment of order " + std::to_string(p) +
                    " diverges for this stationary density");
  }
}

TailExponents closed_form_tail(const BoundarySpec& spec) {
  // gamma = 0: super-exponential decay at 0, phi^-4 density at infinity.
  (void)spec;
  return {std::numeric_limits<double>::infinity(), -3.0};
}

struct Integral {
  double log_scale;  // integral = exp(log_scale) * value
  double value;
  double error;
};

/// int_0^inf u^k exp(kappa(u)) du with kappa(u) = (2b/alpha^2) u -
/// (a/alpha^2) u^2, either directly in u (integer k >= 0) or in w = log u.
Integral closed_form_integral(const BoundarySpec& spec, double k, double tol) {
  const double a2 = spec.alpha * spec.alpha;
  const double lin = 2.0 * spec.b / a2;
  const double quad = spec.a / a2;
  const double sd = spec.alpha / std::sqrt(2.0 * spec.a);
  const bool direct = k >= 0.0 && std::floor(k) == k;
  if (direct) {
    auto log_f = [&](double u) {
      if (u <= 0.0) return k == 0.0 ? 0.0 : kNegInf;
      return sanitize(k * std::log(u) + lin * u - quad * u * u);
    };
    const double peak =
        (2.0 * spec.b + std::sqrt(4.0 * spec.b * spec.b + 8.0 * spec.a * k * a2)) /
        (4.0 * spec.a);
    const double top = log_f(peak);
    auto lf = [&](double u) { return log_f(u) - top; };
    const double lo = quadrature::drop_point(lf, peak, 0.0, kTruncationDrop, sd);
    const double hi =
        quadrature::drop_point(lf, peak, peak + 1e6, kTruncationDrop, sd);
    auto f = [&](double u) { return std::exp(lf(u)); };
    const auto r = quadrature::integrate(
        f, lo, hi, {tol, 0.0, panels_for(hi - lo, sd), 16});
    return {top, r.value, r.error};
  }
  // w = log u: integrand exp((k + 1) w + kappa(e^w))
  auto log_f = [&](double w) {
    const double u = std::exp(w);
    return sanitize((k + 1.0) * w + lin * u - quad * u * u);
  };
  auto dlog_f = [&](double w) {
    const double u = std::exp(w);
    return (k + 1.0) + lin * u - 2.0 * quad * u * u;
  };
  const double peak = find_root(dlog_f, -kLogLimit, std::log(1e6 + 1.0 / sd));
  const double top = log_f(peak);
  auto lf = [&](double w) { return log_f(w) - top; };
  const double step = std::min(0.25, sd / std::exp(peak));
  const double lo = quadrature::drop_point(lf, peak, -kLogLimit, kTruncationDrop, step);
  const double hi = quadrature::drop_point(lf, peak, kLogLimit, kTruncationDrop, step);
  auto f = [&](double w) { return std::exp(lf(w)); };
  const auto r = quadrature::integrate(
      f, lo, hi, {tol, 0.0, panels_for(hi - lo, 4.0 * step), 16});
  return {top, r.value, r.error};
}

}  // namespace

namespace detail {

MomentEstimate moment_closed_form(const BoundarySpec& spec, double p,
                                  double tol) {
  validate(spec);
  if (spec.gamma != 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "closed-form moments require gamma = 0");
  }
  require_integrable(closed_form_tail(spec), p);
  // f*(phi) dphi = c* u^2 exp(kappa(u)) du, so Q_p = N_{2-p} / N_2.
  const Integral num = closed_form_integral(spec, 2.0 - p, tol);
  const Integral den = closed_form_integral(spec, 2.0, tol);
  const double ratio =
      std::exp(num.log_scale - den.log_scale) * num.value / den.value;
  const double rel = num.error / num.value + den.error / den.value;
  return {ratio, std::abs(ratio) * rel};
}

MomentEstimate moment_speed_density(const StationaryDensity& d, double p) {
  require_integrable(d.tail(), p);
  if (p == 0.0) {
    return {1.0, d.normalization_error()};
  }
  auto log_h = [&](double s) { return d.log_g(s) + p * s; };
  const double peak =
      find_root([&](double s) { return d.dlog_g(s) + p; }, -300.0, 300.0);
  const double top = log_h(peak);
  auto lf = [&](double s) { return log_h(s) - top; };
  const double lo = quadrature::drop_point(lf, peak, -kLogLimit, kTruncationDrop, 0.05);
  const double hi = quadrature::drop_point(lf, peak, kLogLimit, kTruncationDrop, 0.05);
  if (lf(lo) > -kTruncationDrop || lf(hi) > -kTruncationDrop) {
    throw Error(ErrorCode::QuadratureFailure,
                "moment tail does not decay within the representable range");
  }
  auto f = [&](double s) { return std::exp(lf(s)); };
  const auto r = quadrature::integrate(
      f, lo, hi, {d.tolerance(), 0.0, panels_for(hi - lo, 0.5), 16});
  // normalization: Q_p = exp(top) * r / Z, Z = 1 / c*
  const double value =
      std::exp(top) * r.value * d.normalizing_constant();
  const double rel = r.error / r.value + d.normalization_error();
  return {value, std::abs(value) * rel};
}

}  // namespace detail

MomentEstimate moment(const StationaryDensity& d, double p) {
  if (d.spec().gamma == 0.0) {
    return detail::moment_closed_form(d.spec(), p, d.tolerance());
  }
  return detail::moment_speed_density(d, p);
}

// ---------------------------------------------------------------------------
// Thresholds

namespace {

struct BoundaryMoments {
  MomentEstimate q1;
  MomentEstimate q2;
};

BoundaryMoments boundary_moments(const BoundarySpec& spec, bool need_q2,
                                 double tol) {
  BoundaryMoments m;
  if (spec.gamma == 0.0) {
    m.q1 = detail::moment_closed_form(spec, 1.0, tol);
    if (need_q2) m.q2 = detail::moment_closed_form(spec, 2.0, tol);
    return m;
  }
  const StationaryDensity d(spec, tol);
  m.q1 = detail::moment_speed_density(d, 1.0);
  if (need_q2) m.q2 = detail::moment_speed_density(d, 2.0);
  return m;
}

ThresholdEstimate threshold(const ModelParams& p, Species resident,
                            double tol) {
  const auto v = validate_params(p);
  if (v.mode == NoiseMode::Deterministic) {
    throw Error(ErrorCode::DegenerateNoise,
                "thresholds need a stochastic boundary density");
  }
  const std::size_t inv = index(other(resident));
  const double beta2 = 0.5 * p.beta[inv] * p.beta[inv];
  const auto m = boundary_moments(boundary_spec(p, resident), beta2 != 0.0, tol);
  ThresholdEstimate t;
  t.value = p.a[inv] - p.c[inv] * m.q1.value - beta2 * m.q2.value;
  t.error = p.c[inv] * m.q1.error + beta2 * m.q2.error;
  return t;
}

}  // namespace

ThresholdEstimate lambda1(const ModelParams& p, double tol) {
  return threshold(p, Species::X, tol);
}

ThresholdEstimate lambda2(const ModelParams& p, double tol) {
  return threshold(p, Species::Y, tol);
}

std::array<double, 2> lambda_linear(const ModelParams& p) {
  std::array<double, 2> growth{};
  for (std::size_t i = 0; i < 2; ++i) {
    growth[i] = p.a[i] - 0.5 * p.gamma[i] * p.gamma[i];
    if (!(growth[i] > 0.0)) {
      throw Error(ErrorCode::BoundaryExtinct,
                  "a" + std::to_string(i + 1) + " - gamma" +
                      std::to_string(i + 1) +
                      "^2/2 <= 0: the species dies out on its own axis",
                  std::to_string(i + 1));
    }
  }
  return {p.a[1] - (p.c[1] / p.b[0]) * growth[0],
          p.a[0] - (p.c[0] / p.b[1]) * growth[1]};
}

std::string_view to_string(StochasticRegime r) noexcept {
  switch (r) {
    case StochasticRegime::Coexist: return "Coexist";
    case StochasticRegime::YDiesXPersists: return "YDiesXPersists";
    case StochasticRegime::XDiesYPersists: return "XDiesYPersists";
    case StochasticRegime::BistableExclusion: return "BistableExclusion";
    case StochasticRegime::BothExtinct: return "BothExtinct";
    case StochasticRegime::Unclassified: return "Unclassified";
  }
  return "Unknown";
}

namespace {

void apply_sign_table(RegimeReport& r, double tol) {
  if (std::abs(r.lambda1) < std::max(tol, r.lambda1_error) ||
      std::abs(r.lambda2) < std::max(tol, r.lambda2_error)) {
    r.regime = StochasticRegime::Unclassified;
    r.basis = "critical";
    return;
  }
  const bool l1 = r.lambda1 > 0.0;
  const bool l2 = r.lambda2 > 0.0;
  if (l1 && l2) {
    r.regime = StochasticRegime::Coexist;
    r.basis = "coexistence";
  } else if (!l1 && l2) {
    r.regime = StochasticRegime::YDiesXPersists;
    r.basis = "exclusion";
  } else if (l1 && !l2) {
    r.regime = StochasticRegime::XDiesYPersists;
    r.basis = "exclusion";
  } else {
    r.regime = StochasticRegime::BistableExclusion;
    r.basis = "bistable-exclusion";
  }
}

}  // namespace

RegimeReport classify_stochastic(const ModelParams& p, double tol) {
  const auto v = validate_params(p, {.allow_deterministic = true});
  RegimeReport r;
  r.mode = v.mode;
  switch (v.mode) {
    case NoiseMode::Deterministic: {
      r.lambda1 = p.a[1] - p.c[1] * p.a[0] / p.b[0];
      r.lambda2 = p.a[0] - p.c[0] * p.a[1] / p.b[1];
      apply_sign_table(r, std::max(tol, kCriticalTolerance));
      if (r.regime != StochasticRegime::Unclassified) r.basis = "deterministic";
      return r;
    }
    case NoiseMode::Linear: {
      std::array<double, 2> growth{};
      for (std::size_t i = 0; i < 2; ++i) {
        growth[i] = p.a[i] - 0.5 * p.gamma[i] * p.gamma[i];
      }
      r.boundary_growth = growth;
      if (std::abs(growth[0]) < tol || std::abs(growth[1]) < tol) {
        r.regime = StochasticRegime::Unclassified;
        r.basis = "critical";
        return r;
      }
      if (growth[0] < 0.0 || growth[1] < 0.0) {
        // a species with negative boundary growth dies on its own
        r.lambda1 = std::numeric_limits<double>::quiet_NaN();
        r.lambda2 = std::numeric_limits<double>::quiet_NaN();
        r.basis = "boundary-extinction";
        if (growth[0] < 0.0 && growth[1] < 0.0) {
          r.regime = StochasticRegime::BothExtinct;
        } else if (growth[0] < 0.0) {
          r.regime = StochasticRegime::XDiesYPersists;
        } else {
          r.regime = StochasticRegime::YDiesXPersists;
        }
        return r;
      }
      const auto l = lambda_linear(p);
      r.lambda1 = l[0];
      r.lambda2 = l[1];
      apply_sign_table(r, tol);
      return r;
    }
    case NoiseMode::PureQuadratic: {
      const auto l1 = lambda1(p, tol);
      const auto l2 = lambda2(p, tol);
      r.lambda1 = l1.value;
      r.lambda2 = l2.value;
      r.lambda1_error = l1.error;
      r.lambda2_error = l2.error;
      apply_sign_table(r, tol);
      return r;
    }
  }
  return r;
}

}  // namespace lv
