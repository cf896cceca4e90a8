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

#include <benchmark/benchmark.h>

#include "lvthresh/pdmp.hpp"

namespace {

const lv::PdmpSpec kSym{{lv::LvRegime{{2, 1.6}, {1, 1}, {2.5, 2.5}},
                         lv::LvRegime{{1.6, 2}, {1, 1}, {2.5, 2.5}}},
                        1.0,
                        1.0};

void BM_Rk4Step(benchmark::State& state) {
  std::array<double, 2> z{0.0, 0.0};
  double t = 0.0;
  for (auto _ : state) {
    z = lv::rk4_integrate(kSym.regimes[0], z, t, t + 1e-2, 1e-2);
    t += 1e-2;
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_Rk4Step);

void BM_SwitchedPath(benchmark::State& state) {
  lv::SimConfig c;
  c.h = 1e-2;
  c.horizon = 1e3;
  c.record_stride = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lv::simulate_pdmp(kSym, 1, {1.0, 1.0}, c).jumps.size());
  }
  state.SetItemsProcessed(state.iterations() * c.steps());
}
BENCHMARK(BM_SwitchedPath)->Unit(benchmark::kMillisecond);

void BM_BoundaryLambdas(benchmark::State& state) {
  lv::PdmpAverageConfig c;
  c.horizon = 1e3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lv::pdmp_boundary_lambdas(kSym, c));
  }
}
BENCHMARK(BM_BoundaryLambdas)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
