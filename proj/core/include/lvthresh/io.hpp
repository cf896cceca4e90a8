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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "lvthresh/analysis.hpp"
#include "lvthresh/model.hpp"
#include "lvthresh/pdmp.hpp"
#include "lvthresh/sde.hpp"
#include "lvthresh/stationary.hpp"

namespace lv::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// {"a":[f,f],"b":[f,f],"c":[f,f],"alpha":[f,f],"beta":[f,f],"gamma":[f,f]}.
/// Missing noise arrays default to zeros; a, b, c are required. Throws
/// ParseError naming the offending key.
ModelParams parse_model(const std::string& text);
ModelParams load_model(const std::filesystem::path& file);
std::string model_to_json(const ModelParams& p);

/// {"regimes":[{"a":[..],"b":[..],"c":[..]},{...}],"alpha":f,"beta":f}.
PdmpSpec parse_pdmp(const std::string& text);
PdmpSpec load_pdmp(const std::filesystem::path& file);
std::string pdmp_to_json(const PdmpSpec& spec);

/// Report with fixed key order; absent slopes are null.
std::string report_to_json(const MonteCarloReport& r);

void write_path_csv(std::ostream& os, const Path& path);
void write_switched_csv(std::ostream& os, const SwitchedPath& path);
void write_jumps_csv(std::ostream& os, const SwitchedPath& path);
void write_density_csv(std::ostream& os, const StationaryDensity& d,
                       std::span<const double> grid);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::filesystem::path& file);

}  // namespace lv::io
