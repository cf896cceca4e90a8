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

#include "lvthresh/analysis.hpp"
#include "lvthresh/sde.hpp"

namespace {

const lv::ModelParams kEx3{{2, 2}, {1, 1}, {2, 2}, {1, 1}, {1, 1}, {0, 0}};

void BM_FullStep(benchmark::State& state) {
  lv::SimConfig c;
  c.h = 1e-4;
  lv::FullSystemStepper s(kEx3, {2.0, 2.0}, c, 0);
  for (auto _ : state) {
    s.step();
    benchmark::DoNotOptimize(s.log_x());
    // stay in range for long runs
    if (s.log_x() < -200.0 || s.log_y() < -200.0) {
      s = lv::FullSystemStepper(kEx3, {2.0, 2.0}, c, s.steps_taken());
    }
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FullStep);

void BM_BoundaryPath(benchmark::State& state) {
  lv::SimConfig c;
  c.horizon = 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lv::simulate_boundary({2.0, 1.0, 1.0, 0.0}, 1.0, c, 0).x.back());
  }
  state.SetItemsProcessed(state.iterations() * c.steps());
}
BENCHMARK(BM_BoundaryPath);

void BM_MonteCarlo(benchmark::State& state) {
  lv::SimConfig c;
  c.horizon = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lv::extinction_probabilities(kEx3, {2.0, 2.0}, 64, c, 1e-6));
  }
  state.SetItemsProcessed(state.iterations() * 64 * c.steps());
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
