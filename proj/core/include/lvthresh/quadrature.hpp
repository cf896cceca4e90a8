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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "lvthresh/error.hpp"

namespace lv::quadrature {

struct Result {
  double value = 0.0;
  /// |I_n - I_{n-1}| between the last two dyadic levels.
  double error = 0.0;
  std::size_t panels = 0;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t initial_panels = 8;
  int max_levels = 14;
};

namespace detail {
using Rule = boost::math::quadrature::gauss<double, 20>;
}  // namespace detail

/// 20-point Gauss-Legendre rule on a single panel [lo, hi].
template <class F>
double panel(F&& f, double lo, double hi) {
  const auto& x = detail::Rule::abscissa();
  const auto& w = detail::Rule::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = half * x[k];
    sum += w[k] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

/// Composite rule on `n` equal panels.
template <class F>
double composite(F&& f, double lo, double hi, std::size_t n) {
  const double width = (hi - lo) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = lo + width * static_cast<double>(i);
    const double r = (i + 1 == n) ? hi : l + width;
    sum += panel(f, l, r);
  }
  return sum;
}

/// Composite Gauss-Legendre with dyadic panel refinement; stops when two
/// successive levels agree to within max(abs_tol, rel_tol*|I|). Throws
/// QuadratureFailure if max_levels is exhausted or the sum is not finite.
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opt = {}) {
  if (!(hi > lo)) {
    return {0.0, 0.0, 0};
  }
  std::size_t n = opt.initial_panels == 0 ? 1 : opt.initial_panels;
  double previous = composite(f, lo, hi, n);
  for (int level = 0; level < opt.max_levels; ++level) {
    n *= 2;
    const double current = composite(f, lo, hi, n);
    if (!std::isfinite(current)) {
      throw Error(ErrorCode::QuadratureFailure,
                  "integrand produced a non-finite sum");
    }
    const double diff = std::abs(current - previous);
    if (diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(current))) {
      return {current, diff, n};
    }
    previous = current;
  }
  throw Error(ErrorCode::QuadratureFailure,
              "composite Gauss-Legendre did not converge after " +
                  std::to_string(opt.max_levels) + " refinements");
}

/// Searches outward from `peak` (where `log_f` is maximal) for the point at
/// which log_f has fallen `drop` below log_f(peak). Returns `limit` when the
/// drop is not reached before it. Direction is the sign of (limit - peak).
template <class LogF>
double drop_point(LogF&& log_f, double peak, double limit, double drop,
                  double initial_step) {
  const double target = log_f(peak) - drop;
  const double dir = limit > peak ? 1.0 : -1.0;
  double inner = peak;
  double step = initial_step;
  for (;;) {
    double outer = inner + dir * step;
    if ((outer - limit) * dir >= 0.0) {
      outer = limit;
      if (log_f(outer) > target) {
        return limit;
      }
    }
    if (log_f(outer) <= target) {
      // bisect between inner (above target) and outer (below target)
      for (int it = 0; it < 200 && std::abs(outer - inner) >
                                       1e-13 * (1.0 + std::abs(outer));
           ++it) {
        const double mid = 0.5 * (inner + outer);
        (log_f(mid) > target ? inner : outer) = mid;
      }
      return outer;
    }
    inner = outer;
    step *= 2.0;
  }
}

}  // namespace lv::quadrature
