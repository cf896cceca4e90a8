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

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "lvthresh/error.hpp"
#include "lvthresh/stationary.hpp"
#include "oracle.hpp"

namespace {

using lv::BoundarySpec;
using lv::ErrorCode;
using lv::StochasticRegime;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const lv::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected lv::Error";
  return ErrorCode::InvalidArgument;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  return g;
}

TEST(Density, MatchesClosedFormPointwise) {
  const BoundarySpec spec{4.0, 1.5, 0.25, 0.0};
  const auto d = lv::stationary_density(spec);
  const double m0 = oracle::peak(spec.a, spec.b, spec.alpha, 0.0);
  const double shift = oracle::log_closed_form(spec.a, spec.b, spec.alpha, m0);
  const double log_norm = std::log(
      oracle::scaled_integral(spec.a, spec.b, spec.alpha, 0.0, shift, m0));
  const auto [lo, hi] = d.truncation();
  for (double phi : log_grid(lo, hi, 100)) {
    const double expected =
        oracle::log_closed_form(spec.a, spec.b, spec.alpha, phi) - shift -
        log_norm;
    EXPECT_NEAR(d.log_density(phi), expected, 1e-8) << "phi=" << phi;
  }
}

TEST(Density, LinearNoiseIsGammaLaw) {
  const BoundarySpec spec{2.0, 1.0, 0.0, 1.0};
  const auto d = lv::stationary_density(spec);
  const auto law = oracle::linear_density(spec.a, spec.b, spec.gamma);
  for (double phi : log_grid(0.05, 8.0, 60)) {
    EXPECT_NEAR(d.log_density(phi), law.log_pdf(phi), 1e-8) << phi;
    EXPECT_NEAR(d.cdf(phi), boost::math::gamma_p(law.shape, law.rate * phi),
                1e-8);
  }
  EXPECT_NEAR(lv::moment(d, 1.0).value, 1.5, 1e-9);
  EXPECT_NEAR(lv::moment(d, 2.0).value, law.second(), 1e-8);
}

TEST(Density, Normalized) {
  for (const auto& f : oracle::kFrozen) {
    const auto d = lv::stationary_density({f.a, f.b, f.alpha, 0.0});
    EXPECT_NEAR(lv::moment(d, 0.0).value, 1.0, 1e-10);
    EXPECT_NEAR(lv::detail::moment_speed_density(d, 0.0).value, 1.0, 1e-10);
    const auto [lo, hi] = d.truncation();
    EXPECT_NEAR(d.cdf(lo), 0.0, 1e-12);
    EXPECT_NEAR(d.cdf(hi), 1.0, 1e-10);
  }
}

TEST(Density, CdfIsMonotone) {
  const auto d = lv::stationary_density({2.0, 1.0, 1.0, 0.0});
  double prev = 0.0;
  for (double phi : log_grid(1e-3, 1e3, 400)) {
    const double c = d.cdf(phi);
    EXPECT_GE(c, prev);
    EXPECT_GE(d(phi), 0.0);
    prev = c;
  }
  EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.0);
}

TEST(Moments, FrozenReferenceValues) {
  for (const auto& f : oracle::kFrozen) {
    const auto d = lv::stationary_density({f.a, f.b, f.alpha, 0.0});
    EXPECT_NEAR(lv::moment(d, 1.0).value / f.q1, 1.0, 1e-9) << f.a;
    EXPECT_NEAR(lv::moment(d, 2.0).value / f.q2, 1.0, 1e-9);
    EXPECT_NEAR(lv::moment(d, -1.0).value / f.qm1, 1.0, 1e-9);
    EXPECT_NEAR(lv::moment(d, 2.5).value / f.q25, 1.0, 1e-9);
  }
}

TEST(Moments, BothRoutesAgree) {
  for (const auto& f : oracle::kFrozen) {
    const auto d = lv::stationary_density({f.a, f.b, f.alpha, 0.0});
    for (double p : {-2.0, -0.5, 0.5, 1.0, 2.0, 2.7}) {
      const double closed = lv::moment(d, p).value;
      const double speed = lv::detail::moment_speed_density(d, p).value;
      EXPECT_NEAR(speed / closed, 1.0, 1e-8) << "p=" << p;
    }
  }
}

TEST(Moments, IndependentOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ab(0.5, 5.0);
  std::uniform_real_distribution<double> al(0.1, 2.0);
  for (int k = 0; k < 20; ++k) {
    const double a = ab(rng), b = ab(rng), alpha = al(rng);
    const auto d = lv::stationary_density({a, b, alpha, 0.0});
    for (double p : {-1.0, 1.0, 2.0}) {
      EXPECT_NEAR(lv::moment(d, p).value / oracle::moment(a, b, alpha, p), 1.0,
                  1e-9);
    }
  }
}

TEST(Moments, DivergentOrdersRefused) {
  const auto d = lv::stationary_density({2.0, 1.0, 1.0, 0.0});
  EXPECT_EQ(code_of([&] { lv::moment(d, 3.0); }), ErrorCode::MomentDiverges);
  EXPECT_EQ(code_of([&] { lv::moment(d, 3.5); }), ErrorCode::MomentDiverges);
  EXPECT_NO_THROW(lv::moment(d, 2.9));
  // Gamma law with shape 2: order below -2 diverges at 0
  const auto g = lv::stationary_density({3.0, 1.0, 0.0, 1.0});
  EXPECT_NEAR(g.tail().at_zero, 2.0 * 3.0 - 1.0, 1e-6);
  EXPECT_EQ(code_of([&] { lv::moment(g, -6.0); }), ErrorCode::MomentDiverges);
  EXPECT_NO_THROW(lv::moment(g, -4.0));
}

TEST(Moments, TailExponents) {
  const auto d = lv::stationary_density({2.0, 1.0, 1.0, 0.0});
  EXPECT_NEAR(d.tail().at_infinity, -3.0, 1e-6);
  EXPECT_GT(d.tail().at_zero, 100.0);
}

// a - gamma^2/2 - (b + alpha gamma) Q1 - alpha^2/2 Q2 = 0 holds for every
// stationary boundary diffusion (the log growth rate averages to zero).
double log_growth_identity(const BoundarySpec& s) {
  const auto d = lv::stationary_density(s);
  const double q1 = lv::moment(d, 1.0).value;
  const double q2 = lv::moment(d, 2.0).value;
  return s.a - 0.5 * s.gamma * s.gamma - (s.b + s.alpha * s.gamma) * q1 -
         0.5 * s.alpha * s.alpha * q2;
}

TEST(Moments, MomentIdentityRandomized) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ab(0.5, 5.0);
  std::uniform_real_distribution<double> al(0.1, 2.0);
  for (int k = 0; k < 50; ++k) {
    const BoundarySpec s{ab(rng), ab(rng), al(rng), 0.0};
    EXPECT_NEAR(log_growth_identity(s) / s.a, 0.0, 1e-8)
        << s.a << " " << s.b << " " << s.alpha;
  }
}

TEST(Moments, MixedNoiseIdentity) {
  for (const BoundarySpec s : {BoundarySpec{4.0, 1.5, 0.5, 0.5},
                               BoundarySpec{2.0, 1.0, 1.0, 1.0},
                               BoundarySpec{3.0, 2.0, -0.3, -1.2}}) {
    EXPECT_NEAR(log_growth_identity(s) / s.a, 0.0, 1e-8);
    EXPECT_NEAR(lv::moment(lv::stationary_density(s), 0.0).value, 1.0, 1e-10);
  }
}

TEST(Density, InvalidSpecs) {
  EXPECT_EQ(code_of([] { lv::stationary_density({2.0, 1.0, 0.0, 2.0}); }),
            ErrorCode::NoStationaryDensity);
  EXPECT_EQ(code_of([] { lv::stationary_density({2.0, 1.0, 0.0, 0.0}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { lv::stationary_density({0.0, 1.0, 1.0, 0.0}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { lv::stationary_density({2.0, 1.0, 1.0, -0.5}); }),
            ErrorCode::InvalidArgument);
}

TEST(Thresholds, WorkedExamplesAgainstFrozenOracle) {
  EXPECT_NEAR(lv::lambda1(oracle::example1()).value, oracle::kEx1Lambda1, 1e-9);
  EXPECT_NEAR(lv::lambda2(oracle::example1()).value, oracle::kEx1Lambda2, 1e-9);
  EXPECT_NEAR(lv::lambda1(oracle::example2()).value, oracle::kEx2Lambda1, 1e-9);
  EXPECT_NEAR(lv::lambda2(oracle::example2()).value, oracle::kEx2Lambda2, 1e-9);
  EXPECT_NEAR(lv::lambda1(oracle::example3()).value, oracle::kEx3Lambda, 1e-9);
  EXPECT_NEAR(lv::lambda2(oracle::example3()).value, oracle::kEx3Lambda, 1e-9);
  EXPECT_LT(lv::lambda1(oracle::example1()).error, 1e-9);
}

TEST(Thresholds, SwapSymmetry) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.5, 4.0);
  for (int k = 0; k < 20; ++k) {
    lv::ModelParams p{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)},
                      {0.3 * u(rng), 0.3 * u(rng)},
                      {0.3 * u(rng), 0.3 * u(rng)}, {0, 0}};
    EXPECT_NEAR(lv::lambda2(p).value,
                lv::lambda1(lv::swap_species(p)).value, 1e-10);
  }
}

TEST(Thresholds, NoCouplingLimit) {
  auto p = oracle::example1();
  p.c[1] = 1e-300;
  p.beta[1] = 0.0;
  EXPECT_DOUBLE_EQ(lv::lambda1(p).value, p.a[1]);
}

TEST(Thresholds, DeterministicLimit) {
  const auto base = oracle::example1();
  const double target = base.a[1] - base.c[1] * base.a[0] / base.b[0];
  double previous_gap = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    auto p = base;
    p.alpha = {eps, eps};
    p.beta = {eps, eps};
    const double gap = std::abs(lv::lambda1(p).value - target);
    EXPECT_LT(gap, previous_gap) << eps;
    previous_gap = gap;
  }
  EXPECT_LT(previous_gap, 1e-2);
}

TEST(Linear, ClosedForm) {
  lv::ModelParams p{{4, 3}, {1.5, 1}, {1, 0.5}, {0, 0}, {0, 0}, {2, 1}};
  const auto l = lv::lambda_linear(p);
  EXPECT_NEAR(l[0], 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(l[1], 4.0 - 1.0 * 2.5, 1e-15);
  p.gamma = {0.0, 0.0};
  const auto d = lv::classify_deterministic(p);
  const auto z = lv::lambda_linear(p);
  EXPECT_DOUBLE_EQ(z[0], d.lambda1);
  EXPECT_DOUBLE_EQ(z[1], d.lambda2);
}

TEST(Linear, MatchesQuadrature) {
  for (const auto& g : {std::array<double, 2>{2.0, 1.0},
                        std::array<double, 2>{0.5, 2.2},
                        std::array<double, 2>{-1.5, 0.3}}) {
    lv::ModelParams p{{4, 3}, {1.5, 1}, {1, 0.5}, {0, 0}, {0, 0}, g};
    const auto l = lv::lambda_linear(p);
    EXPECT_NEAR(lv::lambda1(p).value, l[0], 1e-6);
    EXPECT_NEAR(lv::lambda2(p).value, l[1], 1e-6);
  }
}

TEST(Linear, BoundaryExtinctNamesSpecies) {
  lv::ModelParams p{{4, 3}, {1.5, 1}, {1, 0.5}, {0, 0}, {0, 0}, {2, 3}};
  try {
    lv::lambda_linear(p);
    FAIL();
  } catch (const lv::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundaryExtinct);
    EXPECT_EQ(e.field(), "2");
  }
}

TEST(Classify, WorkedExamples) {
  const auto r1 = lv::classify_stochastic(oracle::example1());
  EXPECT_EQ(r1.regime, StochasticRegime::Coexist);
  EXPECT_EQ(r1.basis, "coexistence");
  const auto r2 = lv::classify_stochastic(oracle::example2());
  EXPECT_EQ(r2.regime, StochasticRegime::YDiesXPersists);
  EXPECT_EQ(r2.basis, "exclusion");
  EXPECT_LT(r2.lambda1, 0.0);
  const auto r3 = lv::classify_stochastic(oracle::example3());
  EXPECT_EQ(r3.regime, StochasticRegime::BistableExclusion);
  EXPECT_EQ(r3.mode, lv::NoiseMode::PureQuadratic);
}

StochasticRegime swapped(StochasticRegime r) {
  if (r == StochasticRegime::YDiesXPersists) return StochasticRegime::XDiesYPersists;
  if (r == StochasticRegime::XDiesYPersists) return StochasticRegime::YDiesXPersists;
  return r;
}

TEST(Classify, SwapEquivariance) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.5, 4.0);
  for (int k = 0; k < 30; ++k) {
    lv::ModelParams p{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)},
                      {0.3 * u(rng), 0.3 * u(rng)},
                      {0.3 * u(rng), 0.3 * u(rng)}, {0, 0}};
    const auto r = lv::classify_stochastic(p);
    const auto s = lv::classify_stochastic(lv::swap_species(p));
    EXPECT_EQ(s.regime, swapped(r.regime));
    EXPECT_NEAR(s.lambda1, r.lambda2, 1e-10);
  }
}

TEST(Classify, LinearModeChecksBoundaryGrowthFirst) {
  lv::ModelParams p{{4, 3}, {1.5, 1}, {1, 0.5}, {0, 0}, {0, 0}, {2, 3}};
  const auto r = lv::classify_stochastic(p);
  ASSERT_TRUE(r.boundary_growth.has_value());
  EXPECT_DOUBLE_EQ((*r.boundary_growth)[1], 3.0 - 4.5);
  EXPECT_EQ(r.regime, StochasticRegime::YDiesXPersists);
  EXPECT_EQ(r.basis, "boundary-extinction");
  p.gamma = {3, 3};
  EXPECT_EQ(lv::classify_stochastic(p).regime, StochasticRegime::BothExtinct);
  p.gamma = {2, 1};
  const auto c = lv::classify_stochastic(p);
  EXPECT_EQ(c.regime, StochasticRegime::Coexist);
  EXPECT_NEAR(c.lambda1, 7.0 / 3.0, 1e-15);
}

TEST(Classify, CriticalIsUnclassified) {
  // noiseless and exactly critical
  lv::ModelParams p{{2, 2}, {1, 1}, {0.5, 1}, {0, 0}, {0, 0}, {0, 0}};
  const auto r = lv::classify_stochastic(p);
  EXPECT_EQ(r.regime, StochasticRegime::Unclassified);
  EXPECT_EQ(r.basis, "critical");
}

}  // namespace
