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

#include "lvthresh/stationary.hpp"

namespace {

const lv::ModelParams kEx2{{4, 2}, {1.5, 1}, {2, 1}, {1, 0.5}, {0.5, 1}, {0, 0}};

void BM_Density(benchmark::State& state) {
  const lv::BoundarySpec spec{4.0, 1.5, 1.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lv::stationary_density(spec));
  }
}
BENCHMARK(BM_Density);

void BM_Moment(benchmark::State& state) {
  const auto d = lv::stationary_density({4.0, 1.5, 1.0, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(lv::moment(d, 2.0));
  }
}
BENCHMARK(BM_Moment);

void BM_Classify(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(lv::classify_stochastic(kEx2));
  }
}
BENCHMARK(BM_Classify);

}  // namespace

BENCHMARK_MAIN();
