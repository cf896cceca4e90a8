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
#include <span>
#include <vector>

#include "lvthresh/model.hpp"
#include "lvthresh/sde.hpp"
#include "lvthresh/stationary.hpp"

namespace lv {

struct LyapunovEstimate {
  double slope = 0.0;
  double std_error = 0.0;
  double window = 0.5;
};

/// Streaming least-squares fit of v against t (Welford-style co-moments).
class SlopeAccumulator {
 public:
  void add(double t, double v) noexcept;
  std::size_t count() const noexcept { return n_; }
  double slope() const noexcept;
  /// Regression standard error of the slope; 0 for fewer than 3 points.
  double std_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_t_ = 0.0;
  double mean_v_ = 0.0;
  double ctt_ = 0.0;
  double ctv_ = 0.0;
  double cvv_ = 0.0;
};

inline constexpr double kDefaultWindow = 0.5;
inline constexpr std::size_t kMinWindowSamples = 100;

/// Least-squares slope of log(component) against t over the last `window`
/// fraction of the path. Throws TooFewSamples below 100 samples and
/// ComponentExtinct when a sample in the window is not representable as a
/// positive double.
LyapunovEstimate lyapunov_exponent(const Path& path, Species component,
                                   double window = kDefaultWindow);

/// Trapezoidal time average of h(component) along the path.
double ergodic_average(const Path& path,
                       const std::function<double(double)>& observable,
                       Species component = Species::X);
/// Trapezoidal time average of h(x, y) along a two-dimensional path.
double ergodic_average(const Path& path,
                       const std::function<double(double, double)>& observable);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

/// Wilson score interval for k successes in n trials at 95%.
Interval wilson_interval(std::size_t k, std::size_t n, double z = kWilsonZ95);
/// Half-width of the Wilson interval divided by z.
double wilson_sigma(std::size_t k, std::size_t n, double z = kWilsonZ95);

struct MonteCarloReport {
  std::size_t n_paths = 0;
  std::size_t n_failed = 0;
  std::size_t x_extinct = 0;  ///< X crossed the floor first
  std::size_t y_extinct = 0;  ///< Y crossed the floor first
  std::size_t neither_count = 0;
  double p_hat = 0.0;
  double q_hat = 0.0;
  double neither = 0.0;
  Interval ci_p;
  Interval ci_q;
  /// Mean tail slope of log X over X-extinct paths (and Y likewise).
  std::optional<double> mean_slope_x;
  std::optional<double> mean_slope_y;
  double slope_x_stderr = 0.0;
  double slope_y_stderr = 0.0;
  double floor = 0.0;
  double horizon = 0.0;
  double step = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> failed_paths;
};

inline constexpr double kDefaultFloor = 1e-8;

/// Outcome of one path, as produced by the simulators' batch drivers.
struct PathOutcome {
  enum class Kind { XExtinct, YExtinct, Neither, Failed } kind = Kind::Neither;
  double slope_x = 0.0;
  double slope_y = 0.0;
};

/// Builds a report from per-path outcomes (in path-index order).
MonteCarloReport aggregate_outcomes(std::span<const PathOutcome> outcomes,
                                    double floor, const SimConfig& cfg);

/// Runs n_paths seeded simulate_full paths (path i uses streams (seed, i))
/// and scores the first floor crossing of each.
MonteCarloReport extinction_probabilities(const ModelParams& p,
                                          std::array<double, 2> z0,
                                          std::size_t n_paths,
                                          const SimConfig& cfg,
                                          double floor = kDefaultFloor,
                                          double window = kDefaultWindow);

struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;  ///< 5% level
  std::size_t n = 0;
  bool rejected() const noexcept { return statistic > critical_value; }
};

/// Two-sided one-sample KS distance between samples and a CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);
/// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// Two-sample asymptotic critical value.
double ks_two_sample_critical_value(std::size_t n, std::size_t m,
                                    double level = 0.05);
/// Asymptotic critical value with Stephens' small-sample correction.
double ks_critical_value(std::size_t n, double level = 0.05);

/// KS distance between samples and a stationary density's CDF. Throws
/// TooFewSamples below 50 samples.
KsResult empirical_vs_stationary(std::span<const double> samples,
                                 const StationaryDensity& d);

}  // namespace lv
