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

#include "lvthresh/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvthresh/error.hpp"
#include "lvthresh/io.hpp"
#include "lvthresh/parallel.hpp"
#include "outcome.hpp"

namespace lv {

namespace {

void require_positive(double v, const std::string& field) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteCoefficient, field + " is not finite",
                field);
  }
  if (!(v > 0.0)) {
    throw Error(ErrorCode::NonPositiveCoefficient,
                field + " must be strictly positive", field);
  }
}

int draw_initial(const PdmpSpec& spec, std::uint64_t seed,
                 std::uint64_t path, std::optional<int> i0) {
  if (i0) {
    if (*i0 != 1 && *i0 != 2) {
      throw Error(ErrorCode::InvalidArgument, "initial regime must be 1 or 2",
                  "i0");
    }
    return *i0;
  }
  GaussianStream u(seed, {path, Noise::Initial});
  return u.uniform() < spec.beta / (spec.alpha + spec.beta) ? 1 : 2;
}

double rate_of(const PdmpSpec& spec, int regime) noexcept {
  return regime == 1 ? spec.alpha : spec.beta;
}

std::array<double, 2> rk4_step(const LvRegime& r, std::array<double, 2> z,
                               double dt) noexcept {
  auto shift = [](std::array<double, 2> z, std::array<double, 2> k, double s) {
    return std::array<double, 2>{z[0] + s * k[0], z[1] + s * k[1]};
  };
  const auto k1 = lv_log_rates(r, z);
  const auto k2 = lv_log_rates(r, shift(z, k1, 0.5 * dt));
  const auto k3 = lv_log_rates(r, shift(z, k2, 0.5 * dt));
  const auto k4 = lv_log_rates(r, shift(z, k3, dt));
  for (int i = 0; i < 2; ++i) {
    z[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return z;
}

}  // namespace

void validate(const PdmpSpec& spec) {
  for (int k = 0; k < 2; ++k) {
    const auto& r = spec.regimes[k];
    const std::string pre = "regime" + std::to_string(k + 1) + ".";
    for (int i = 0; i < 2; ++i) {
      const std::string idx = std::to_string(i + 1);
      require_positive(r.a[i], pre + "a" + idx);
      require_positive(r.b[i], pre + "b" + idx);
      require_positive(r.c[i], pre + "c" + idx);
    }
  }
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) {
    throw Error(ErrorCode::InvalidArgument, "switching rate alpha must be > 0",
                "alpha");
  }
  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta)) {
    throw Error(ErrorCode::InvalidArgument, "switching rate beta must be > 0",
                "beta");
  }
}

PdmpSpec relabel_regimes(const PdmpSpec& spec) noexcept {
  return {{spec.regimes[1], spec.regimes[0]}, spec.beta, spec.alpha};
}

std::array<double, 2> lv_log_rates(const LvRegime& r,
                                   std::array<double, 2> log_z) noexcept {
  const double x = std::exp(log_z[0]);
  const double y = std::exp(log_z[1]);
  return {r.a[0] - r.b[0] * x - r.c[0] * y, r.a[1] - r.b[1] * y - r.c[1] * x};
}

std::array<double, 2> rk4_integrate(const LvRegime& r,
                                    std::array<double, 2> log_z, double t0,
                                    double t1, double h) {
  if (!(h > 0.0) || !(t1 >= t0)) {
    throw Error(ErrorCode::InvalidArgument, "need h > 0 and t1 >= t0", "h");
  }
  const auto full = static_cast<std::size_t>(std::floor((t1 - t0) / h + 1e-9));
  for (std::size_t k = 0; k < full; ++k) log_z = rk4_step(r, log_z, h);
  const double rest = (t1 - t0) - static_cast<double>(full) * h;
  if (rest > 1e-15 * std::max(1.0, std::abs(t1))) {
    log_z = rk4_step(r, log_z, rest);
  }
  return log_z;
}

std::string pdmp_scheme_tag(const SimConfig& cfg) {
  return "rk4-exact-jump;h=" + io::format_double(cfg.h);
}

PdmpStepper::PdmpStepper(const PdmpSpec& spec, std::optional<int> i0,
                         std::array<double, 2> z0, const SimConfig& cfg,
                         std::uint64_t path_index)
    : spec_(spec),
      h_(cfg.h),
      z_{0.0, 0.0},
      clock_(cfg.seed, {path_index, Noise::Switch}) {
  validate(spec);
  cfg.validate();
  for (int i = 0; i < 2; ++i) {
    if (!(z0[i] > 0.0) || !std::isfinite(z0[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "initial densities must be finite and positive",
                  i == 0 ? "x0" : "y0");
    }
    z_[i] = std::log(z0[i]);
  }
  regime_ = draw_initial(spec, cfg.seed, path_index, i0);
  next_jump_ = clock_.exponential(1.0) / exit_rate();
}

double PdmpStepper::exit_rate() const noexcept {
  return rate_of(spec_, regime_);
}

void PdmpStepper::step() {
  double t = time();
  const double t1 = static_cast<double>(n_ + 1) * h_;
  while (next_jump_ < t1) {
    z_ = rk4_step(spec_.regimes[regime_ - 1], z_, next_jump_ - t);
    t = next_jump_;
    const int to = 3 - regime_;
    jumps_.push_back({t, regime_, to, z_});
    regime_ = to;
    next_jump_ = t + clock_.exponential(1.0) / exit_rate();
  }
  z_ = rk4_step(spec_.regimes[regime_ - 1], z_, t1 - t);
  ++n_;
  if (!std::isfinite(z_[0]) || !std::isfinite(z_[1])) {
    throw Error(ErrorCode::NonFiniteState,
                "switched state left the representable range at step " +
                    std::to_string(n_),
                {}, n_);
  }
}

SwitchedPath simulate_pdmp(const PdmpSpec& spec, std::optional<int> i0,
                           std::array<double, 2> z0, const SimConfig& cfg,
                           std::uint64_t path_index) {
  PdmpStepper stepper(spec, i0, z0, cfg, path_index);
  const std::size_t n = cfg.steps();
  SwitchedPath path;
  path.seed = cfg.seed;
  path.scheme = pdmp_scheme_tag(cfg);
  auto record = [&] {
    path.times.push_back(stepper.time());
    path.log_x.push_back(stepper.log_x());
    path.log_y.push_back(stepper.log_y());
    path.x.push_back(std::exp(stepper.log_x()));
    path.y.push_back(std::exp(stepper.log_y()));
    path.regime.push_back(stepper.regime());
  };
  record();
  for (std::size_t k = 1; k <= n; ++k) {
    stepper.step();
    if (k % cfg.record_stride == 0) record();
  }
  path.jumps = stepper.jumps();
  return path;
}

BatchEstimate pdmp_boundary_average(
    const PdmpSpec& spec, Species species,
    const std::function<double(int, double)>& obs,
    const PdmpAverageConfig& cfg) {
  validate(spec);
  if (!(cfg.h > 0.0) || !(cfg.horizon > cfg.h) || !(cfg.u0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "need h > 0, horizon > h and u0 > 0", "h");
  }
  if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0) || cfg.batches < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "burn-in must lie in [0, 1) and batches must be >= 2",
                "batches");
  }
  const std::size_t s = index(species);
  const std::size_t n = static_cast<std::size_t>(
      std::floor(cfg.horizon / cfg.h + 1e-9));
  const auto burn = static_cast<std::size_t>(
      std::llround(cfg.burn_in * static_cast<double>(n)));
  const std::size_t batch_len = (n - burn) / cfg.batches;
  if (batch_len == 0) {
    throw Error(ErrorCode::TooFewSamples,
                "horizon too short for the requested batches", "horizon");
  }

  // state: log u on the axis and the running integral of obs
  auto field = [&](int regime, double log_u) {
    const auto& r = spec.regimes[regime - 1];
    const double u = std::exp(log_u);
    return std::array<double, 2>{r.a[s] - r.b[s] * u, obs(regime, u)};
  };
  auto step = [&](int regime, std::array<double, 2> z, double dt) {
    const auto k1 = field(regime, z[0]);
    const auto k2 = field(regime, z[0] + 0.5 * dt * k1[0]);
    const auto k3 = field(regime, z[0] + 0.5 * dt * k2[0]);
    const auto k4 = field(regime, z[0] + dt * k3[0]);
    for (int i = 0; i < 2; ++i) {
      z[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return z;
  };

  GaussianStream clock(cfg.seed, {0, Noise::Switch});
  int regime = draw_initial(spec, cfg.seed, 0, cfg.i0);
  double next_jump = clock.exponential(1.0) / rate_of(spec, regime);
  std::array<double, 2> z{std::log(cfg.u0), 0.0};

  std::vector<double> batch_means;
  batch_means.reserve(cfg.batches);
  double mark = 0.0;
  const double batch_time = static_cast<double>(batch_len) * cfg.h;
  const std::size_t last = burn + batch_len * cfg.batches;
  for (std::size_t k = 1; k <= last; ++k) {
    double t = static_cast<double>(k - 1) * cfg.h;
    const double t1 = static_cast<double>(k) * cfg.h;
    while (next_jump < t1) {
      z = step(regime, z, next_jump - t);
      t = next_jump;
      regime = 3 - regime;
      next_jump = t + clock.exponential(1.0) / rate_of(spec, regime);
    }
    z = step(regime, z, t1 - t);
    if (!std::isfinite(z[0]) || !std::isfinite(z[1])) {
      throw Error(ErrorCode::NonFiniteState,
                  "boundary state left the representable range at step " +
                      std::to_string(k),
                  {}, k);
    }
    if (k == burn) mark = z[1];
    if (k > burn && (k - burn) % batch_len == 0) {
      batch_means.push_back((z[1] - mark) / batch_time);
      mark = z[1];
    }
  }

  const double nb = static_cast<double>(batch_means.size());
  double mean = 0.0;
  for (double m : batch_means) mean += m;
  mean /= nb;
  double ss = 0.0;
  for (double m : batch_means) ss += (m - mean) * (m - mean);
  const double se = std::sqrt(ss / (nb - 1.0) / nb);
  return {mean, std::max(se, 1e-12 * (1.0 + std::abs(mean)))};
}

PdmpLambdas pdmp_boundary_lambdas(const PdmpSpec& spec,
                                  const PdmpAverageConfig& cfg) {
  // y invades along the x-axis, x invades along the y-axis
  auto y_rate = [&](int i, double u) {
    const auto& r = spec.regimes[i - 1];
    return r.a[1] - r.c[1] * u;
  };
  auto x_rate = [&](int i, double v) {
    const auto& r = spec.regimes[i - 1];
    return r.a[0] - r.c[0] * v;
  };
  return {pdmp_boundary_average(spec, Species::X, y_rate, cfg),
          pdmp_boundary_average(spec, Species::Y, x_rate, cfg)};
}

MonteCarloReport pdmp_exclusion_mc(const PdmpSpec& spec,
                                   std::optional<int> i0,
                                   std::array<double, 2> z0,
                                   std::size_t n_paths, const SimConfig& cfg,
                                   double floor, double window) {
  validate(spec);
  cfg.validate();
  if (n_paths < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1", "n");
  }
  if (!(floor > 0.0) || !(floor < std::min(z0[0], z0[1]))) {
    throw Error(ErrorCode::InvalidArgument,
                "floor must be positive and below both initial densities",
                "floor");
  }
  if (!(window > 0.0 && window <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "window must lie in (0, 1]",
                "window");
  }
  const double log_floor = std::log(floor);
  const std::size_t steps = cfg.steps();
  const double window_start =
      static_cast<double>(steps) * cfg.h * (1.0 - window);
  std::vector<PathOutcome> outcomes(n_paths);
  parallel_for(n_paths, worker_count(), [&](std::size_t i) {
    PathOutcome out;
    try {
      PdmpStepper stepper(spec, i0, z0, cfg, i);
      out = detail::score_path(stepper, steps, log_floor, window_start,
                               cfg.record_stride);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteState) throw;
      out.kind = PathOutcome::Kind::Failed;
    }
    outcomes[i] = out;
  });
  return aggregate_outcomes(outcomes, floor, cfg);
}

double invariant_box_bound(const PdmpSpec& spec) noexcept {
  double h0 = 0.0;
  for (const auto& r : spec.regimes) {
    for (int i = 0; i < 2; ++i) h0 = std::max(h0, r.a[i] / r.b[i]);
  }
  return h0;
}

}  // namespace lv
