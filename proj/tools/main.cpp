// Copyright 2026 The rudyn authors
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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rudyn/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string candidates;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<long> max_n;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--candidates", opts.candidates,
                  "comma-separated candidate eigenvalues, e.g. \"1,-1\" or \"0.5+0.866i\"");
  cmd->add_option("--out", opts.out, "output path (overrides the config's output field)");
  cmd->add_option("--seed", opts.seed, "RNG seed (overrides the config's seed)");
  cmd->add_option("--max-n", opts.max_n, "iteration count (overrides the config)");
}

rudyn::ExperimentConfig load_config(const CommonOptions& opts) {
  rudyn::ExperimentConfig config = rudyn::ExperimentConfig::from_file(opts.config_path);
  if (!opts.candidates.empty()) {
    config.candidates = rudyn::parse_complex_list(opts.candidates);
  }
  if (!opts.out.empty()) {
    config.output = opts.out;
  }
  if (opts.seed.has_value()) {
    config.seed = opts.seed;
  }
  if (opts.max_n.has_value()) {
    if (*opts.max_n < 1) {
      throw rudyn::ConfigError("configuration error: --max-n must be at least 1");
    }
    config.iterations = *opts.max_n;
  }
  return config;
}

std::string require_output(const rudyn::ExperimentConfig& config) {
  if (config.output.empty()) {
    throw rudyn::ConfigError(
        "configuration error: an output path is required (config \"output\" or --out)");
  }
  return config.output;
}

int run(int argc, char** argv) {
  CLI::App app{"iterated random unitary channels: attractor spaces and asymptotic dynamics"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::string solve_json_path;
  CLI::App* solve = app.add_subcommand("solve", "solve the attractor structure and report it");
  add_common_options(solve, solve_opts);
  solve->add_option("--json", solve_json_path, "also write the report as JSON to this path");

  CommonOptions curve_opts;
  bool curve_trace_norm = false;
  CLI::App* curve = app.add_subcommand(
      "curve", "emit per-iteration distance-to-asymptotics curves as CSV");
  add_common_options(curve, curve_opts);
  curve->add_flag("--trace-norm", curve_trace_norm,
                  "use the trace-norm distance instead of Hilbert-Schmidt");

  CommonOptions verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant battery for a config");
  add_common_options(verify, verify_opts);

  CommonOptions traj_opts;
  CLI::App* trajectory = app.add_subcommand(
      "trajectory", "compare Monte Carlo trajectory averages against the exact map");
  add_common_options(trajectory, traj_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(rudyn::ExitCode::kConfig);
  }

  if (solve->parsed()) {
    const auto config = load_config(solve_opts);
    const rudyn::SolveReport report = rudyn::run_solve(config);
    report.print(std::cout);
    if (!solve_json_path.empty()) {
      std::ofstream out(solve_json_path, std::ios::binary);
      if (!out) {
        throw rudyn::ConfigError("configuration error: cannot write JSON report to " +
                                 solve_json_path);
      }
      out << report.json_text();
    }
    return static_cast<int>(report.pass ? rudyn::ExitCode::kOk : rudyn::ExitCode::kVerifyFailed);
  }

  if (curve->parsed()) {
    auto config = load_config(curve_opts);
    if (curve_trace_norm) {
      config.use_trace_norm = true;
    }
    const std::string base = require_output(config);
    const auto results = rudyn::run_curve(config);
    const bool multi = results.size() > 1;
    for (const rudyn::CurveResult& result : results) {
      const std::string path = rudyn::output_path_for(base, result.label, multi);
      rudyn::write_curve_csv(path, result);
      std::cout << result.label << ": "
                << (result.stationary ? "stationary" : "non-stationary")
                << " (max |Tr(X' rho)| over lambda != 1 blocks: "
                << result.max_alternating_overlap << ") -> " << path << "\n";
    }
    return static_cast<int>(rudyn::ExitCode::kOk);
  }

  if (verify->parsed()) {
    const auto config = load_config(verify_opts);
    const rudyn::VerifyReport report = rudyn::run_verify(config);
    report.print(std::cout);
    return static_cast<int>(report.all_pass() ? rudyn::ExitCode::kOk
                                              : rudyn::ExitCode::kVerifyFailed);
  }

  if (trajectory->parsed()) {
    const auto config = load_config(traj_opts);
    const std::string base = require_output(config);
    const auto results = rudyn::run_trajectory(config);
    const bool multi = results.size() > 1;
    for (const rudyn::TrajectoryResult& result : results) {
      const std::string path = rudyn::output_path_for(base, result.label, multi);
      rudyn::write_trajectory_csv(path, result);
      std::cout << result.label << " -> " << path << "\n";
    }
    return static_cast<int>(rudyn::ExitCode::kOk);
  }

  return static_cast<int>(rudyn::ExitCode::kConfig);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rudyn::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return static_cast<int>(rudyn::ExitCode::kConfig);
  } catch (const rudyn::CapacityError& e) {
    std::cerr << e.what() << "\n";
    return static_cast<int>(rudyn::ExitCode::kCapacity);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(rudyn::ExitCode::kInternal);
  }
}
