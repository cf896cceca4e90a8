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

#include "lvthresh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lvthresh/error.hpp"
#include "lvthresh/parallel.hpp"
#include "outcome.hpp"

namespace lv {

void SlopeAccumulator::add(double t, double v) noexcept {
  ++n_;
  const double n = static_cast<double>(n_);
  const double dt = t - mean_t_;
  const double dv = v - mean_v_;
  mean_t_ += dt / n;
  mean_v_ += dv / n;
  const double dt2 = t - mean_t_;
  const double dv2 = v - mean_v_;
  ctt_ += dt * dt2;
  ctv_ += dt * dv2;
  cvv_ += dv * dv2;
}

double SlopeAccumulator::slope() const noexcept {
  return ctt_ > 0.0 ? ctv_ / ctt_ : 0.0;
}

double SlopeAccumulator::std_error() const noexcept {
  if (n_ < 3 || !(ctt_ > 0.0)) return 0.0;
  const double b = slope();
  const double ssr = std::max(0.0, cvv_ - b * ctv_);
  return std::sqrt(ssr / static_cast<double>(n_ - 2) / ctt_);
}

namespace {

// log of the smallest positive normal double
const double kLogMinNormal = std::log(std::numeric_limits<double>::min());

const std::vector<double>& component_logs(const Path& path, Species c) {
  if (c == Species::Y && !path.two_dimensional()) {
    throw Error(ErrorCode::InvalidArgument,
                "boundary paths only carry the X component");
  }
  return c == Species::X ? path.log_x : path.log_y;
}

}  // namespace

LyapunovEstimate lyapunov_exponent(const Path& path, Species component,
                                   double window) {
  if (!(window > 0.0 && window <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "window must lie in (0, 1]",
                "window");
  }
  const auto& logs = component_logs(path, component);
  if (path.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "path has fewer than two samples");
  }
  const double t0 = path.times.front();
  const double t1 = path.times.back();
  const double start = t1 - window * (t1 - t0);
  SlopeAccumulator acc;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path.times[i] < start) continue;
    if (!(logs[i] >= kLogMinNormal)) {
      throw Error(ErrorCode::ComponentExtinct,
                  "component underflowed at t = " +
                      std::to_string(path.times[i]));
    }
    acc.add(path.times[i], logs[i]);
  }
  if (acc.count() < kMinWindowSamples) {
    throw Error(ErrorCode::TooFewSamples,
                "window holds " + std::to_string(acc.count()) +
                    " samples; at least 100 are required");
  }
  return {acc.slope(), acc.std_error(), window};
}

namespace {

template <class H>
double trapezoid_average(const std::vector<double>& t, H&& h_at) {
  if (t.size() < 2) return t.empty() ? 0.0 : h_at(0);
  double num = 0.0;
  double den = 0.0;
  double prev = h_at(0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double cur = h_at(i);
    const double dt = t[i] - t[i - 1];
    num += 0.5 * (prev + cur) * dt;
    den += dt;
    prev = cur;
  }
  return num / den;
}

}  // namespace

double ergodic_average(const Path& path,
                       const std::function<double(double)>& observable,
                       Species component) {
  const auto& logs = component_logs(path, component);
  const auto& states = component == Species::X ? path.x : path.y;
  (void)logs;
  return trapezoid_average(path.times,
                           [&](std::size_t i) { return observable(states[i]); });
}

double ergodic_average(const Path& path,
                       const std::function<double(double, double)>& observable) {
  if (!path.two_dimensional()) {
    throw Error(ErrorCode::InvalidArgument,
                "two-argument observable needs a two-dimensional path");
  }
  return trapezoid_average(path.times, [&](std::size_t i) {
    return observable(path.x[i], path.y[i]);
  });
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // the bound touching p is exact at k = 0 and k = n
  return {k == 0 ? 0.0 : std::max(0.0, center - half),
          k == n ? 1.0 : std::min(1.0, center + half)};
}

double wilson_sigma(std::size_t k, std::size_t n, double z) {
  if (n == 0) return 0.5;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  return std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) /
         (1.0 + z2 / nn);
}

MonteCarloReport aggregate_outcomes(std::span<const PathOutcome> outcomes,
                                    double floor, const SimConfig& cfg) {
  MonteCarloReport r;
  r.n_paths = outcomes.size();
  r.floor = floor;
  r.horizon = cfg.horizon;
  r.step = cfg.h;
  r.seed = cfg.seed;
  double sum_x = 0.0, sum_xx = 0.0, sum_y = 0.0, sum_yy = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    switch (o.kind) {
      case PathOutcome::Kind::Failed:
        ++r.n_failed;
        r.failed_paths.push_back(i);
        break;
      case PathOutcome::Kind::XExtinct:
        ++r.x_extinct;
        sum_x += o.slope_x;
        sum_xx += o.slope_x * o.slope_x;
        break;
      case PathOutcome::Kind::YExtinct:
        ++r.y_extinct;
        sum_y += o.slope_y;
        sum_yy += o.slope_y * o.slope_y;
        break;
      case PathOutcome::Kind::Neither:
        ++r.neither_count;
        break;
    }
  }
  const std::size_t completed = r.n_paths - r.n_failed;
  if (completed > 0) {
    const double n = static_cast<double>(completed);
    r.p_hat = static_cast<double>(r.x_extinct) / n;
    r.q_hat = static_cast<double>(r.y_extinct) / n;
    r.neither = 1.0 - (r.p_hat + r.q_hat);
  }
  r.ci_p = wilson_interval(r.x_extinct, completed);
  r.ci_q = wilson_interval(r.y_extinct, completed);
  auto finish = [](std::size_t k, double s, double ss, std::optional<double>& mean,
                   double& se) {
    if (k == 0) return;
    const double n = static_cast<double>(k);
    mean = s / n;
    if (k > 1) {
      const double var = std::max(0.0, (ss - s * s / n) / (n - 1.0));
      se = std::sqrt(var / n);
    }
  };
  finish(r.x_extinct, sum_x, sum_xx, r.mean_slope_x, r.slope_x_stderr);
  finish(r.y_extinct, sum_y, sum_yy, r.mean_slope_y, r.slope_y_stderr);
  return r;
}

MonteCarloReport extinction_probabilities(const ModelParams& p,
                                          std::array<double, 2> z0,
                                          std::size_t n_paths,
                                          const SimConfig& cfg, double floor,
                                          double window) {
  validate_params(p, {.allow_deterministic = true});
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
      FullSystemStepper stepper(p, z0, cfg, i);
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

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

namespace {
double kolmogorov_quantile(double level) {
  return std::sqrt(-0.5 * std::log(0.5 * level));
}
}  // namespace

double ks_critical_value(std::size_t n, double level) {
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_quantile(level) / (sn + 0.12 + 0.11 / sn);
}

double ks_two_sample_critical_value(std::size_t n, std::size_t m,
                                    double level) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return kolmogorov_quantile(level) * std::sqrt((nn + mm) / (nn * mm));
}

KsResult empirical_vs_stationary(std::span<const double> samples,
                                 const StationaryDensity& d) {
  if (samples.size() < 50) {
    throw Error(ErrorCode::TooFewSamples,
                "KS comparison needs at least 50 samples");
  }
  KsResult r;
  r.n = samples.size();
  r.statistic = ks_statistic({samples.begin(), samples.end()},
                             [&](double x) { return d.cdf(x); });
  r.critical_value = ks_critical_value(r.n);
  return r;
}

}  // namespace lv
