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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rudyn/qubit_network.hpp"

namespace rudyn {

/// Raised for malformed or inconsistent experiment configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kVerifyFailed = 3,
  kCapacity = 4,
};

/// Named initial-state constructors. Bit strings are written with the
/// highest qubit first, matching the usual |j_N ... j_1> ket labels, so
/// "000001" denotes basis index z = 1.
struct StateSpec {
  enum class Kind { kBasis, kSuperposition, kMaximallyMixed };
  struct Term {
    std::string bits;
    Complex amplitude;
  };

  Kind kind = Kind::kBasis;
  std::string label;
  std::string bits;
  std::vector<Term> terms;

  /// Builds the density matrix on a d-dimensional space (d must be a power
  /// of two when bit strings are used). Superpositions are normalized.
  DensityMatrix build(Eigen::Index dim) const;
};

/// A parsed experiment description: the channel (either a cyclic CNOT
/// network or an explicit unitary list), initial states, iteration budget
/// and output destination.
struct ExperimentConfig {
  enum class Mode { kExactMap, kTrajectory };

  std::optional<NetworkSpec> network;
  /// Non-empty when the network lists explicit (control, target) edges
  /// instead of the cyclic default.
  std::vector<std::pair<int, int>> network_edges;
  std::vector<std::pair<double, ComplexMatrix>> explicit_terms;
  std::vector<StateSpec> states;
  long iterations = 1;
  std::optional<std::uint64_t> seed;
  Mode mode = Mode::kExactMap;
  long samples = 1000;
  std::optional<std::vector<Complex>> candidates;
  /// Curve metric: Hilbert-Schmidt distance by default, trace-norm distance
  /// when set ("distance": "trace" or --trace-norm).
  bool use_trace_norm = false;
  std::string output;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);

  RandomUnitaryChannel build_channel() const;
  std::vector<std::pair<std::string, DensityMatrix>> build_states(Eigen::Index dim) const;

  /// Explicit candidates if given; {1, -1} for CNOT networks (the gates are
  /// involutions); nullopt otherwise (full peripheral spectrum).
  std::optional<std::vector<Complex>> effective_candidates() const;
};

/// Parses a comma-separated eigenvalue list such as "1,-1" or
/// "0.5+0.866i,-0.5-0.866i".
std::vector<Complex> parse_complex_list(const std::string& text);

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

struct SolveBlockInfo {
  Complex eigenvalue;
  Eigen::Index dimension;
  double residual;
};

struct SolveReport {
  Eigen::Index dim = 0;
  std::vector<SolveBlockInfo> blocks;
  Eigen::Index total_dimension = 0;
  int prob_resamples = 0;
  double prob_max_projector_distance = 0.0;
  CstarReport cstar;
  bool pass = false;

  void print(std::ostream& out) const;
  std::string json_text() const;
};

SolveReport run_solve(const ExperimentConfig& config);

struct CurvePoint {
  long n;
  double distance;
  double entropy;
};

struct CurveResult {
  std::string label;
  std::vector<CurvePoint> points;
  double max_alternating_overlap = 0.0;  ///< largest |Tr(X† rho)| over lambda != 1 blocks
  bool stationary = true;
};

std::vector<CurveResult> run_curve(const ExperimentConfig& config);

struct VerifyCheck {
  std::string name;
  double worst;
  double tolerance;
  bool pass;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
  void print(std::ostream& out) const;
};

VerifyReport run_verify(const ExperimentConfig& config);

struct TrajectoryResult {
  std::string label;
  std::vector<std::pair<long, double>> points;  ///< (n, mean-vs-exact distance)
};

std::vector<TrajectoryResult> run_trajectory(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Fixed "%.17g" rendering so regenerated CSV files are byte-identical.
std::string format_double(double value);

/// Per-state output path: the base path itself for a single state, otherwise
/// the label (sanitized) is inserted before the extension.
std::string output_path_for(const std::string& base, const std::string& label, bool multi);

void write_curve_csv(const std::string& path, const CurveResult& result);
void write_trajectory_csv(const std::string& path, const TrajectoryResult& result);

// ---------------------------------------------------------------------------
// Seeded sampling utilities (verification suites, Monte Carlo checks)
// ---------------------------------------------------------------------------

/// Standard normal via Box-Muller on the portable uniform source.
double gaussian(TrajectoryRng& rng);

/// Ginibre-based random density matrix G G† / Tr(G G†).
DensityMatrix random_density_matrix(Eigen::Index dim, TrajectoryRng& rng);

/// Haar-ish random unitary from the QR decomposition of a Ginibre matrix.
UnitaryOperator random_unitary(Eigen::Index dim, TrajectoryRng& rng);

/// Strictly positive probability vector summing to one.
std::vector<double> random_probabilities(std::size_t count, TrajectoryRng& rng);

}  // namespace rudyn
