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

#include "lv_cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lvthresh/analysis.hpp"
#include "lvthresh/error.hpp"
#include "lvthresh/io.hpp"
#include "lvthresh/model.hpp"
#include "lvthresh/pdmp.hpp"
#include "lvthresh/sde.hpp"
#include "lvthresh/stationary.hpp"
#include "lvthresh/version.hpp"

namespace lv::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// Result of executing one resolved configuration.
struct Outcome {
  int code = kOk;
  std::vector<std::string> outputs;
};

using Executor = std::function<Outcome(const ordered_json&, Context&)>;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::CriticalCase:
      return kCriticalCase;
    case ErrorCode::NonFiniteState:
    case ErrorCode::QuadratureFailure:
    case ErrorCode::ComponentExtinct:
    case ErrorCode::TooFewSamples:
      return kNumericFailure;
    default:
      return kInputError;
  }
}

ordered_json parse_json_text(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T get(const ordered_json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const ordered_json::exception&) {
    throw Error(ErrorCode::ParseError,
                std::string("configuration key \"") + key +
                    "\" is missing or has the wrong type",
                key);
  }
}

template <class T>
std::optional<T> get_opt(const ordered_json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg.at(key).is_null()) return std::nullopt;
  return get<T>(cfg, key);
}

template <class T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json();
}

std::array<double, 2> pair_from(const ordered_json& cfg, const char* key) {
  const auto v = get<std::vector<double>>(cfg, key);
  if (v.size() != 2) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(key) + " needs exactly two values", key);
  }
  return {v[0], v[1]};
}

ModelParams model_from(const ordered_json& cfg) {
  return io::parse_model(cfg.at("model").dump());
}

PdmpSpec pdmp_from(const ordered_json& cfg) {
  return io::parse_pdmp(cfg.at("pdmp").dump());
}

bool has_pdmp(const ordered_json& cfg) { return cfg.contains("pdmp"); }

SimConfig sim_config_from(const ordered_json& cfg) {
  SimConfig s;
  s.h = get<double>(cfg, "h");
  s.horizon = get<double>(cfg, "T");
  s.seed = get<std::uint64_t>(cfg, "seed");
  s.record_stride = get<std::size_t>(cfg, "stride");
  s.taming_cap = get_opt<double>(cfg, "taming_cap");
  return s;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) {
    throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string(),
                "out");
  }
  os << text;
}

template <class Writer>
void write_with(const fs::path& file, Writer&& w) {
  std::ofstream os(file, std::ios::binary);
  if (!os) {
    throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string(),
                "out");
  }
  w(os);
}

void write_manifest(const std::string& command, const ordered_json& cfg,
                    const Outcome& outcome, double seconds) {
  const auto out = get_opt<std::string>(cfg, "out");
  if (!out) return;
  ordered_json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = cfg.contains("seed") ? cfg.at("seed") : ordered_json();
  m["config"] = cfg;
  m["outputs"] = outcome.outputs;
  m["exit_code"] = outcome.code;
  m["duration_s"] = seconds;
  write_text(*out + ".manifest.json", m.dump(2) + "\n");
}

// ---- classify ------------------------------------------------------------

Outcome exec_classify(const ordered_json& cfg, Context& ctx) {
  const ModelParams p = model_from(cfg);
  const double tol = get<double>(cfg, "tol");
  const RegimeReport r = classify_stochastic(p, tol);

  ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["lambda1"] = r.lambda1;
  j["lambda2"] = r.lambda2;
  j["lambda1_error"] = r.lambda1_error;
  j["lambda2_error"] = r.lambda2_error;
  j["regime"] = std::string(to_string(r.regime));
  j["basis"] = r.basis;
  j["boundary_growth"] = opt_json(r.boundary_growth);

  ordered_json det;
  bool det_critical = false;
  try {
    const auto d = classify_deterministic(p);
    det["lambda1"] = d.lambda1;
    det["lambda2"] = d.lambda2;
    det["case"] = std::string(to_string(d.case_id));
    det["equilibrium"] = opt_json(d.equilibrium);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CriticalCase) throw;
    det_critical = true;
    det["lambda1"] = p.a[1] - p.c[1] * p.a[0] / p.b[0];
    det["lambda2"] = p.a[0] - p.c[0] * p.a[1] / p.b[1];
    det["case"] = "critical";
    det["equilibrium"] = nullptr;
  }
  j["deterministic"] = det;

  Outcome o;
  const bool critical = r.regime == StochasticRegime::Unclassified ||
                        (r.mode == NoiseMode::Deterministic && det_critical);
  o.code = critical ? kCriticalCase : kOk;

  const std::string text = j.dump(2) + "\n";
  if (get<bool>(cfg, "json")) {
    ctx.out << text;
  } else {
    ctx.out << "mode        " << j["mode"].get<std::string>() << "\n"
            << "lambda1     " << io::format_double(r.lambda1) << "\n"
            << "lambda2     " << io::format_double(r.lambda2) << "\n"
            << "regime      " << to_string(r.regime) << " (" << r.basis
            << ")\n"
            << "noiseless   " << det["case"].get<std::string>() << "\n";
  }
  if (const auto out = get_opt<std::string>(cfg, "out")) {
    write_text(*out, text);
    o.outputs.push_back(*out);
  }
  return o;
}

// ---- simulate ------------------------------------------------------------

Outcome exec_simulate(const ordered_json& cfg, Context& ctx) {
  const SimConfig sc = sim_config_from(cfg);
  const auto z0 = pair_from(cfg, "z0");
  const auto out = get<std::string>(cfg, "out");
  Outcome o;
  if (has_pdmp(cfg)) {
    const PdmpSpec spec = pdmp_from(cfg);
    const auto path =
        simulate_pdmp(spec, get_opt<int>(cfg, "i0"), z0, sc);
    write_with(out, [&](std::ostream& os) { io::write_switched_csv(os, path); });
    const std::string jumps = out + ".jumps.csv";
    write_with(jumps, [&](std::ostream& os) { io::write_jumps_csv(os, path); });
    o.outputs = {out, jumps};
    ctx.out << "wrote " << path.size() << " samples and " << path.jumps.size()
            << " jumps\n";
    return o;
  }
  const ModelParams p = model_from(cfg);
  validate_params(p, {.allow_deterministic = true});
  Path path;
  if (const auto k = get_opt<int>(cfg, "boundary")) {
    if (*k != 1 && *k != 2) {
      throw Error(ErrorCode::InvalidArgument, "--boundary must be 1 or 2",
                  "boundary");
    }
    const Species s = *k == 1 ? Species::X : Species::Y;
    path = simulate_boundary(boundary_spec(p, s), z0[index(s)], sc, 0,
                             s == Species::X ? Noise::B1 : Noise::B3);
  } else {
    path = simulate_full(p, z0, sc);
  }
  write_with(out, [&](std::ostream& os) { io::write_path_csv(os, path); });
  o.outputs = {out};
  ctx.out << "wrote " << path.size() << " samples (" << path.scheme << ")\n";
  return o;
}

// ---- montecarlo ----------------------------------------------------------

Outcome exec_montecarlo(const ordered_json& cfg, Context& ctx) {
  const SimConfig sc = sim_config_from(cfg);
  const auto z0 = pair_from(cfg, "z0");
  const auto n = get<std::size_t>(cfg, "n");
  const double floor = get<double>(cfg, "floor");
  const double window = get<double>(cfg, "window");
  MonteCarloReport r;
  if (has_pdmp(cfg)) {
    r = pdmp_exclusion_mc(pdmp_from(cfg), get_opt<int>(cfg, "i0"), z0, n, sc,
                          floor, window);
  } else {
    r = extinction_probabilities(model_from(cfg), z0, n, sc, floor, window);
  }
  Outcome o;
  const std::string text = io::report_to_json(r) + "\n";
  if (const auto out = get_opt<std::string>(cfg, "out")) {
    write_text(*out, text);
    o.outputs.push_back(*out);
  } else {
    ctx.out << text;
  }
  const std::size_t completed = r.n_paths - r.n_failed;
  if (10 * completed < 9 * r.n_paths) {
    ctx.err << "lv: only " << completed << " of " << r.n_paths
            << " paths completed\n";
    o.code = kDegradedBatch;
  }
  return o;
}

// ---- pdmp-lambdas --------------------------------------------------------

Outcome exec_pdmp_lambdas(const ordered_json& cfg, Context& ctx) {
  PdmpAverageConfig ac;
  ac.horizon = get<double>(cfg, "T");
  ac.h = get<double>(cfg, "h");
  ac.seed = get<std::uint64_t>(cfg, "seed");
  ac.burn_in = get<double>(cfg, "burn_in");
  ac.batches = get<std::size_t>(cfg, "batches");
  ac.i0 = get_opt<int>(cfg, "i0");
  const auto l = pdmp_boundary_lambdas(pdmp_from(cfg), ac);
  ordered_json j;
  j["lambda1"] = l.lambda1.value;
  j["lambda1_stderr"] = l.lambda1.std_error;
  j["lambda2"] = l.lambda2.value;
  j["lambda2_stderr"] = l.lambda2.std_error;
  j["horizon"] = ac.horizon;
  j["step"] = ac.h;
  j["seed"] = ac.seed;
  const std::string text = j.dump(2) + "\n";
  Outcome o;
  if (const auto out = get_opt<std::string>(cfg, "out")) {
    write_text(*out, text);
    o.outputs.push_back(*out);
  } else {
    ctx.out << text;
  }
  return o;
}

// ---- density -------------------------------------------------------------

Outcome exec_density(const ordered_json& cfg, Context& ctx) {
  const ModelParams p = model_from(cfg);
  const int k = get<int>(cfg, "species");
  if (k != 1 && k != 2) {
    throw Error(ErrorCode::InvalidArgument, "--species must be 1 or 2",
                "species");
  }
  const double lo = get<double>(cfg, "from");
  const double hi = get<double>(cfg, "to");
  const auto points = get<std::size_t>(cfg, "points");
  const bool log_grid = get<bool>(cfg, "log");
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "grid needs 0 < from < to and at least two points", "from");
  }
  const auto d = stationary_density(
      boundary_spec(p, k == 1 ? Species::X : Species::Y),
      get<double>(cfg, "tol"));
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = log_grid ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
  }
  Outcome o;
  if (const auto out = get_opt<std::string>(cfg, "out")) {
    write_with(*out, [&](std::ostream& os) { io::write_density_csv(os, d, grid); });
    o.outputs.push_back(*out);
  } else {
    io::write_density_csv(ctx.out, d, grid);
  }
  return o;
}

const std::map<std::string, Executor>& executors() {
  static const std::map<std::string, Executor> table{
      {"classify", exec_classify},
      {"simulate", exec_simulate},
      {"montecarlo", exec_montecarlo},
      {"pdmp-lambdas", exec_pdmp_lambdas},
      {"density", exec_density},
  };
  return table;
}

int execute(const std::string& command, const ordered_json& cfg,
            Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const Outcome o = executors().at(command)(cfg, ctx);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  write_manifest(command, cfg, o, secs);
  return o.code;
}

ordered_json input_json(const std::string& file, bool pdmp) {
  ordered_json j;
  if (pdmp) {
    j["pdmp"] = parse_json_text(io::pdmp_to_json(io::load_pdmp(file)));
  } else {
    j["model"] = parse_json_text(io::model_to_json(io::load_model(file)));
  }
  return j;
}

std::vector<double> parse_pair_flag(const std::string& text,
                                    const char* name) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("--") + name + " expects two comma-separated numbers",
                  name);
    }
  }
  if (v.size() != 2) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("--") + name + " expects two comma-separated numbers",
                name);
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Thresholds and simulation for stochastic competitive "
               "Lotka-Volterra systems",
               "lv"};
  // --h is the step size, so help is long-form only
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // classify
  std::string input;
  double tol = kDefaultTolerance;
  bool as_json = false;
  std::string out_file;
  auto* classify = app.add_subcommand("classify", "Thresholds and regime");
  classify->add_option("model", input, "model JSON file")->required();
  classify->add_option("--tol", tol, "quadrature tolerance");
  classify->add_flag("--json", as_json, "print the JSON report");
  classify->add_option("--out", out_file, "also write the report here");

  // simulate / montecarlo share most flags
  std::string z0_text = "2,2";
  double horizon = 1.0;
  double h = 1e-3;
  std::uint64_t seed = 0;
  std::size_t stride = 1;
  bool pdmp = false;
  std::optional<int> boundary;
  std::optional<int> i0;
  std::optional<double> cap;
  auto add_sim_flags = [&](CLI::App* cmd) {
    cmd->add_option("input", input, "model JSON (regime JSON with --pdmp)")
        ->required();
    cmd->add_option("--z0", z0_text, "initial densities x,y");
    cmd->add_option("--T", horizon, "time horizon");
    cmd->add_option("--h", h, "step size");
    cmd->add_option("--seed", seed, "64-bit seed");
    cmd->add_option("--stride", stride, "steps per recorded sample");
    cmd->add_flag("--pdmp", pdmp, "input is a switched-regime file");
    cmd->add_option("--i0", i0, "initial regime (1 or 2)");
    cmd->add_option("--cap", cap, "drift taming cap (default 1/h)");
  };
  auto* simulate = app.add_subcommand("simulate", "Write one sample path");
  add_sim_flags(simulate);
  simulate->add_option("--boundary", boundary,
                       "simulate species 1 or 2 alone");
  simulate->add_option("--out", out_file, "path CSV")->required();

  std::size_t n_paths = 100;
  double floor = kDefaultFloor;
  double window = kDefaultWindow;
  auto* mc = app.add_subcommand("montecarlo", "Extinction frequencies");
  add_sim_flags(mc);
  mc->add_option("--n", n_paths, "number of paths");
  mc->add_option("--floor", floor, "extinction floor");
  mc->add_option("--window", window, "tail fraction for slopes");
  mc->add_option("--out", out_file, "report JSON");

  double burn_in = 0.1;
  std::size_t batches = 20;
  auto* lambdas =
      app.add_subcommand("pdmp-lambdas", "Boundary growth rates of a PDMP");
  lambdas->add_option("regimes", input, "regime JSON file")->required();
  lambdas->add_option("--T", horizon, "time horizon");
  lambdas->add_option("--h", h, "RK4 step");
  lambdas->add_option("--seed", seed, "64-bit seed");
  lambdas->add_option("--burn-in", burn_in, "discarded fraction");
  lambdas->add_option("--batches", batches, "batch count");
  lambdas->add_option("--i0", i0, "initial regime (1 or 2)");
  lambdas->add_option("--out", out_file, "report JSON");

  int species = 1;
  double grid_from = 0.01;
  double grid_to = 10.0;
  std::size_t points = 200;
  bool log_grid = false;
  auto* density =
      app.add_subcommand("density", "Boundary stationary density on a grid");
  density->add_option("model", input, "model JSON file")->required();
  density->add_option("--species", species, "1 or 2");
  density->add_option("--from", grid_from, "first grid point");
  density->add_option("--to", grid_to, "last grid point");
  density->add_option("--points", points, "grid size");
  density->add_flag("--log", log_grid, "log-spaced grid");
  density->add_option("--tol", tol, "quadrature tolerance");
  density->add_option("--out", out_file, "CSV file");

  std::string manifest;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest");
  replay->add_option("manifest", manifest, "manifest JSON")->required();
  replay->add_option("--out", out_file, "redirect the primary output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  auto with_out = [&](ordered_json& cfg) {
    cfg["out"] = out_file.empty() ? ordered_json() : ordered_json(out_file);
  };

  try {
    if (replay->parsed()) {
      const ordered_json m = parse_json_text(io::read_file(manifest));
      const auto command = get<std::string>(m, "command");
      if (!executors().count(command)) {
        throw Error(ErrorCode::ParseError, "unknown command " + command,
                    "command");
      }
      ordered_json cfg = m.at("config");
      if (!out_file.empty()) cfg["out"] = out_file;
      return execute(command, cfg, ctx);
    }
    if (classify->parsed()) {
      ordered_json cfg = input_json(input, false);
      cfg["tol"] = tol;
      cfg["json"] = as_json;
      with_out(cfg);
      return execute("classify", cfg, ctx);
    }
    if (simulate->parsed() || mc->parsed()) {
      ordered_json cfg = input_json(input, pdmp);
      cfg["z0"] = parse_pair_flag(z0_text, "z0");
      cfg["T"] = horizon;
      cfg["h"] = h;
      cfg["seed"] = seed;
      cfg["stride"] = stride;
      cfg["i0"] = opt_json(i0);
      cfg["taming_cap"] = opt_json(cap);
      if (simulate->parsed()) {
        cfg["boundary"] = opt_json(boundary);
        with_out(cfg);
        return execute("simulate", cfg, ctx);
      }
      cfg["n"] = n_paths;
      cfg["floor"] = floor;
      cfg["window"] = window;
      with_out(cfg);
      return execute("montecarlo", cfg, ctx);
    }
    if (lambdas->parsed()) {
      ordered_json cfg = input_json(input, true);
      cfg["T"] = horizon;
      cfg["h"] = h;
      cfg["seed"] = seed;
      cfg["burn_in"] = burn_in;
      cfg["batches"] = batches;
      cfg["i0"] = opt_json(i0);
      with_out(cfg);
      return execute("pdmp-lambdas", cfg, ctx);
    }
    if (density->parsed()) {
      ordered_json cfg = input_json(input, false);
      cfg["species"] = species;
      cfg["from"] = grid_from;
      cfg["to"] = grid_to;
      cfg["points"] = points;
      cfg["log"] = log_grid;
      cfg["tol"] = tol;
      with_out(cfg);
      return execute("density", cfg, ctx);
    }
  } catch (const Error& e) {
    err << "lv: " << to_string(e.code()) << ": " << e.what();
    if (!e.field().empty()) err << " [" << e.field() << "]";
    if (e.step()) err << " [step " << *e.step() << "]";
    err << "\n";
    return exit_code_for(e.code());
  }
  return kInputError;
}

}  // namespace lv::cli
