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

#include <cstdint>
#include <random>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace lv {

/// Names the independent noise sources of one simulated path.
enum class Noise : std::uint32_t {
  B1 = 0,      ///< drives X (quadratic and linear terms)
  B2 = 1,      ///< shared cross term of X and Y
  B3 = 2,      ///< drives Y
  Switch = 3,  ///< holding times of the telegraph chain
  Initial = 4, ///< initial regime draw
};

struct StreamId {
  std::uint64_t path = 0;
  Noise noise = Noise::B1;
};

/// Reproducible N(0,1) source keyed by (seed, path, noise). The engine is
/// seeded through std::seed_seq, whose output is fixed by the standard, so
/// streams replay identically across platforms and thread schedules.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, StreamId id) {
    const auto noise = static_cast<std::uint32_t>(id.noise);
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id.path),
                      static_cast<std::uint32_t>(id.path >> 32), noise,
                      0x6c76u};
    engine_.seed(seq);
  }

  double operator()() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double exponential(double rate) {
    return boost::random::exponential_distribution<double>(rate)(engine_);
  }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::uniform_01<double> uniform_;
};

inline GaussianStream gaussian_stream(std::uint64_t seed, StreamId id) {
  return GaussianStream(seed, id);
}

}  // namespace lv
