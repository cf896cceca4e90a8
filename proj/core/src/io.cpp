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

#include "lvthresh/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lvthresh/error.hpp"

namespace lv::io {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

std::array<double, 2> pair_of(const json& obj, const std::string& key,
                              const std::string& field, bool required) {
  if (!obj.contains(key)) {
    if (!required) return {0.0, 0.0};
    throw Error(ErrorCode::ParseError, "missing key \"" + field + "\"", field);
  }
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw Error(ErrorCode::ParseError,
                "\"" + field + "\" must be an array of two numbers", field);
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

double number_of(const json& obj, const std::string& key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw Error(ErrorCode::ParseError, "\"" + key + "\" must be a number",
                key);
  }
  return obj.at(key).get<double>();
}

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ParseError, what + " must be a JSON object", what);
  }
}

// to_chars keeps CSV cells exact; nlohmann's own number output is also
// shortest round-trip, so JSON goes through dump().
void put(std::ostream& os, double v) { os << format_double(v); }

}  // namespace

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + file.string(),
                file.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelParams parse_model(const std::string& text) {
  const json j = parse_text(text);
  require_object(j, "model");
  ModelParams p;
  p.a = pair_of(j, "a", "a", true);
  p.b = pair_of(j, "b", "b", true);
  p.c = pair_of(j, "c", "c", true);
  p.alpha = pair_of(j, "alpha", "alpha", false);
  p.beta = pair_of(j, "beta", "beta", false);
  p.gamma = pair_of(j, "gamma", "gamma", false);
  return p;
}

ModelParams load_model(const std::filesystem::path& file) {
  return parse_model(read_file(file));
}

std::string model_to_json(const ModelParams& p) {
  ordered_json j;
  j["a"] = p.a;
  j["b"] = p.b;
  j["c"] = p.c;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  return j.dump();
}

PdmpSpec parse_pdmp(const std::string& text) {
  const json j = parse_text(text);
  require_object(j, "regime file");
  if (!j.contains("regimes") || !j.at("regimes").is_array() ||
      j.at("regimes").size() != 2) {
    throw Error(ErrorCode::ParseError,
                "\"regimes\" must be an array of two objects", "regimes");
  }
  PdmpSpec s;
  for (std::size_t k = 0; k < 2; ++k) {
    const json& r = j.at("regimes")[k];
    const std::string pre = "regimes[" + std::to_string(k) + "].";
    require_object(r, "regimes[" + std::to_string(k) + "]");
    s.regimes[k].a = pair_of(r, "a", pre + "a", true);
    s.regimes[k].b = pair_of(r, "b", pre + "b", true);
    s.regimes[k].c = pair_of(r, "c", pre + "c", true);
  }
  s.alpha = number_of(j, "alpha");
  s.beta = number_of(j, "beta");
  return s;
}

PdmpSpec load_pdmp(const std::filesystem::path& file) {
  return parse_pdmp(read_file(file));
}

std::string pdmp_to_json(const PdmpSpec& spec) {
  ordered_json j;
  j["regimes"] = ordered_json::array();
  for (const auto& r : spec.regimes) {
    ordered_json o;
    o["a"] = r.a;
    o["b"] = r.b;
    o["c"] = r.c;
    j["regimes"].push_back(o);
  }
  j["alpha"] = spec.alpha;
  j["beta"] = spec.beta;
  return j.dump();
}

std::string report_to_json(const MonteCarloReport& r) {
  ordered_json j;
  j["n_paths"] = r.n_paths;
  j["p_hat"] = r.p_hat;
  j["q_hat"] = r.q_hat;
  j["neither"] = r.neither;
  j["ci_p"] = {r.ci_p.lo, r.ci_p.hi};
  j["ci_q"] = {r.ci_q.lo, r.ci_q.hi};
  j["mean_slope_x"] = r.mean_slope_x ? ordered_json(*r.mean_slope_x) : ordered_json();
  j["mean_slope_y"] = r.mean_slope_y ? ordered_json(*r.mean_slope_y) : ordered_json();
  j["floor"] = r.floor;
  j["horizon"] = r.horizon;
  j["seed"] = r.seed;
  j["step"] = r.step;
  j["x_extinct"] = r.x_extinct;
  j["y_extinct"] = r.y_extinct;
  j["neither_count"] = r.neither_count;
  j["slope_x_stderr"] = r.slope_x_stderr;
  j["slope_y_stderr"] = r.slope_y_stderr;
  j["n_failed"] = r.n_failed;
  j["failed_paths"] = r.failed_paths;
  return j.dump(2);
}

void write_path_csv(std::ostream& os, const Path& path) {
  const bool two = path.two_dimensional();
  os << (two ? "t,x,y\n" : "t,x\n");
  for (std::size_t i = 0; i < path.size(); ++i) {
    put(os, path.times[i]);
    os << ',';
    put(os, path.x[i]);
    if (two) {
      os << ',';
      put(os, path.y[i]);
    }
    os << '\n';
  }
}

void write_switched_csv(std::ostream& os, const SwitchedPath& path) {
  os << "t,x,y,regime\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    put(os, path.times[i]);
    os << ',';
    put(os, path.x[i]);
    os << ',';
    put(os, path.y[i]);
    os << ',' << path.regime[i] << '\n';
  }
}

void write_jumps_csv(std::ostream& os, const SwitchedPath& path) {
  os << "t_jump,from,to\n";
  for (const auto& j : path.jumps) {
    put(os, j.time);
    os << ',' << j.from << ',' << j.to << '\n';
  }
}

void write_density_csv(std::ostream& os, const StationaryDensity& d,
                       std::span<const double> grid) {
  os << "phi,density\n";
  for (double phi : grid) {
    put(os, phi);
    os << ',';
    put(os, d(phi));
    os << '\n';
  }
}

}  // namespace lv::io
