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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lv {

enum class ErrorCode {
  NonPositiveCoefficient,
  NonFiniteCoefficient,
  DegenerateNoise,
  MixedModeUnsupported,
  InvalidArgument,
  CriticalCase,
  NoStationaryDensity,
  QuadratureFailure,
  MomentDiverges,
  BoundaryExtinct,
  NonFiniteState,
  ComponentExtinct,
  TooFewSamples,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code plus an optional field name
/// (validation errors) or step index (integration errors).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {},
        std::optional<std::size_t> step = std::nullopt)
      : std::runtime_error(message),
        code_(code),
        field_(std::move(field)),
        step_(step) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  ErrorCode code_;
  std::string field_;
  std::optional<std::size_t> step_;
};

}  // namespace lv
