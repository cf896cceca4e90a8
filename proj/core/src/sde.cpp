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

#include "lvthresh/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lvthresh/error.hpp"
#include "lvthresh/io.hpp"

namespace lv {

namespace {

// Drift is capped at cap (1/time) and each diffusion coefficient at
// sqrt(cap), so one step moves log-state by at most O(1) at cap = 1/h.
double tame(double drift, double cap) { return std::clamp(drift, -cap, cap); }
double tame_vol(double vol, double cap) {
  const double s = std::sqrt(cap);
  return std::clamp(vol, -s, s);
}

// exp(lx) overflows past this
const double kMaxLog = std::log(std::numeric_limits<double>::max());

bool representable(double lx) { return lx <= kMaxLog && !std::isnan(lx); }

void require_positive_start(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " must be finite and strictly positive",
                what);
  }
}

}  // namespace

void SimConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidArgument, "step h must be positive", "h");
  }
  if (!(horizon >= h) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "horizon T must be >= h", "T");
  }
  if (record_stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "record stride must be >= 1",
                "record_stride");
  }
  if (taming_cap && !(*taming_cap > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "taming cap must be positive",
                "taming_cap");
  }
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::floor(horizon / h + 1e-9));
}

std::string scheme_tag(const SimConfig& cfg) {
  return "log-euler-maruyama;h=" + io::format_double(cfg.h) +
         ";drift-cap=" + io::format_double(cfg.cap());
}

Path simulate_boundary(const BoundarySpec& spec, double x0,
                       const SimConfig& cfg, std::uint64_t path_index,
                       Noise noise) {
  cfg.validate();
  require_positive_start(x0, "x0");
  if (!(spec.a > 0.0) || !(spec.b > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "boundary spec needs a, b > 0");
  }
  GaussianStream dw(cfg.seed, {path_index, noise});
  const std::size_t n = cfg.steps();
  const double h = cfg.h;
  const double sqrt_h = std::sqrt(h);
  const double cap = cfg.cap();
  const double drift0 = spec.a - 0.5 * spec.gamma * spec.gamma;

  Path path;
  path.seed = cfg.seed;
  path.scheme = scheme_tag(cfg);
  const std::size_t records = n / cfg.record_stride + 1;
  path.times.reserve(records);
  path.x.reserve(records);
  path.log_x.reserve(records);

  double lx = std::log(x0);
  auto record = [&](std::size_t k) {
    path.times.push_back(static_cast<double>(k) * h);
    path.log_x.push_back(lx);
    path.x.push_back(std::exp(lx));
  };
  record(0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double x = std::exp(lx);
    const double drift = drift0 - spec.b * x -
                         0.5 * spec.alpha * spec.alpha * x * x -
                         spec.alpha * spec.gamma * x;
    const double vol = spec.gamma + spec.alpha * x;
    lx += tame(drift, cap) * h + tame_vol(vol, cap) * sqrt_h * dw();
    if (!representable(lx)) {
      throw Error(ErrorCode::NonFiniteState,
                  "boundary state left the representable range at step " +
                      std::to_string(k),
                  {}, k);
    }
    if (k % cfg.record_stride == 0) record(k);
  }
  return path;
}

FullSystemStepper::FullSystemStepper(const ModelParams& p,
                                     std::array<double, 2> z0,
                                     const SimConfig& cfg,
                                     std::uint64_t path_index)
    : p_(p),
      h_(cfg.h),
      sqrt_h_(std::sqrt(cfg.h)),
      cap_(cfg.cap()),
      lx_(std::log(z0[0])),
      ly_(std::log(z0[1])),
      b1_(cfg.seed, {path_index, Noise::B1}),
      b2_(cfg.seed, {path_index, Noise::B2}),
      b3_(cfg.seed, {path_index, Noise::B3}) {
  cfg.validate();
  require_positive_start(z0[0], "x0");
  require_positive_start(z0[1], "y0");
}

void FullSystemStepper::step() {
  const double x = std::exp(lx_);
  const double y = std::exp(ly_);
  const auto& a = p_.a;
  const auto& b = p_.b;
  const auto& c = p_.c;
  const auto& al = p_.alpha;
  const auto& be = p_.beta;
  const auto& ga = p_.gamma;

  // Ito drift of log X and log Y
  const double drift_x = a[0] - b[0] * x - c[0] * y -
                         0.5 * al[0] * al[0] * x * x -
                         0.5 * be[0] * be[0] * y * y -
                         0.5 * ga[0] * ga[0] - al[0] * ga[0] * x;
  const double drift_y = a[1] - b[1] * y - c[1] * x -
                         0.5 * al[1] * al[1] * y * y -
                         0.5 * be[1] * be[1] * x * x -
                         0.5 * ga[1] * ga[1] - al[1] * ga[1] * y;

  const double d1 = sqrt_h_ * b1_();
  const double d2 = sqrt_h_ * b2_();
  const double d3 = sqrt_h_ * b3_();

  lx_ += tame(drift_x, cap_) * h_ + tame_vol(ga[0] + al[0] * x, cap_) * d1 +
         tame_vol(be[0] * y, cap_) * d2;
  ly_ += tame(drift_y, cap_) * h_ + tame_vol(ga[1] + al[1] * y, cap_) * d3 +
         tame_vol(be[1] * x, cap_) * d2;
  ++n_;
  if (!representable(lx_) || !representable(ly_)) {
    throw Error(ErrorCode::NonFiniteState,
                "state left the representable range at step " +
                    std::to_string(n_),
                {}, n_);
  }
}

Path simulate_full(const ModelParams& p, std::array<double, 2> z0,
                   const SimConfig& cfg, std::uint64_t path_index) {
  validate_params(p, {.allow_deterministic = true});
  FullSystemStepper stepper(p, z0, cfg, path_index);
  const std::size_t n = cfg.steps();

  Path path;
  path.seed = cfg.seed;
  path.scheme = scheme_tag(cfg);
  const std::size_t records = n / cfg.record_stride + 1;
  for (auto* v : {&path.times, &path.x, &path.y, &path.log_x, &path.log_y}) {
    v->reserve(records);
  }
  auto record = [&] {
    path.times.push_back(stepper.time());
    path.log_x.push_back(stepper.log_x());
    path.log_y.push_back(stepper.log_y());
    path.x.push_back(std::exp(stepper.log_x()));
    path.y.push_back(std::exp(stepper.log_y()));
  };
  record();
  for (std::size_t k = 1; k <= n; ++k) {
    stepper.step();
    if (k % cfg.record_stride == 0) record();
  }
  return path;
}

}  // namespace lv
