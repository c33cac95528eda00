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

#include "rudyn/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

using namespace rudyn;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fig2_config_text() {
  return R"({
    "network": {"qubits": 2},
    "initial_states": [
      {"type": "superposition", "label": "weighted", "terms": [
        {"bits": "10", "amplitude": [0.24270509831248424, 0.17633557568774194]},
        {"bits": "11", "amplitude": [0.90096886790241915, 0.43388373911755823]}
      ]},
      {"type": "superposition", "label": "balanced", "terms": [
        {"bits": "10", "amplitude": 1.0},
        {"bits": "11", "amplitude": 1.0}
      ]}
    ],
    "iterations": 30,
    "seed": 9,
    "output": "fig2.csv"
  })";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config round trip for a network experiment") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 3, "topology": "cyclic", "gates": "cnot",
                "probabilities": [0.5, 0.25, 0.25]},
    "initial_state": {"type": "basis", "bits": "001"},
    "iterations": 40,
    "seed": 7,
    "mode": "exact-map",
    "candidates": [1, -1],
    "output": "out.csv"
  })");
  REQUIRE(config.network.has_value());
  CHECK(config.network->n_qubits == 3);
  CHECK(config.network->probabilities == std::vector<double>{0.5, 0.25, 0.25});
  REQUIRE(config.states.size() == 1);
  CHECK(config.states[0].label == "001");
  CHECK(config.iterations == 40);
  REQUIRE(config.seed.has_value());
  CHECK(*config.seed == 7);
  REQUIRE(config.candidates.has_value());
  CHECK(config.candidates->size() == 2);
  CHECK(config.output == "out.csv");

  const auto channel = config.build_channel();
  CHECK(channel.dim() == 8);
  const auto states = config.build_states(channel.dim());
  REQUIRE(states.size() == 1);
  CHECK(states[0].second.matrix()(1, 1) == Complex(1.0, 0.0));  // "001" -> z = 1
}

TEST_CASE("config validation rejects malformed input") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{}"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 2},
    "unitaries": [{"prob": 1.0, "matrix": [[1, 0], [0, 1]]}]
  })"),
                  ConfigError);  // both channel sources
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 2}, "iterations": 0
  })"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 2, "topology": "line"}
  })"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 2},
    "initial_state": {"type": "cat"}
  })"),
                  ConfigError);
}

TEST_CASE("a corrupted probability vector is rejected at channel build") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 3, "probabilities": [0.4, 0.3, 0.2]},
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 5
  })");
  CHECK_THROWS_AS(config.build_channel(), ConfigError);
}

TEST_CASE("bit strings use the highest-qubit-first caption order") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 6},
    "initial_state": {"type": "basis", "bits": "000001"},
    "iterations": 1
  })");
  const auto states = config.build_states(64);
  CHECK(states[0].second.matrix()(1, 1) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(config.build_states(16), ConfigError);  // wrong length for d
}

TEST_CASE("superposition states are normalized on load") {
  const auto config = ExperimentConfig::from_json_text(fig2_config_text());
  const auto states = config.build_states(4);
  REQUIRE(states.size() == 2);
  for (const auto& [label, rho] : states) {
    CHECK(std::abs(rho.matrix().trace() - Complex(1.0, 0.0)) < 1e-12);
  }
  // |amplitudes|^2 of the weighted state: 0.09 / 1.09 on z = 2
  CHECK(states[0].second.matrix()(2, 2).real() == doctest::Approx(0.09 / 1.09).epsilon(1e-10));
}

TEST_CASE("network edge lists build custom CNOT channels") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 3, "edges": [[1, 2], [2, 1], [2, 3]]},
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 1
  })");
  const auto channel = config.build_channel();
  CHECK(channel.term_count() == 3);
  CHECK(channel.dim() == 8);
  CHECK(channel.terms()[0].probability == doctest::Approx(1.0 / 3.0));
  CHECK(channel.all_permutations());

  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 3, "edges": [[1, 1]]},
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 1
  })")
                      .build_channel(),
                  ConfigError);
}

TEST_CASE("explicit unitary lists build channels with permutation detection") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "unitaries": [
      {"prob": 0.5, "matrix": [[0, 1], [1, 0]]},
      {"prob": 0.5, "matrix": [[[0.70710678118654752, 0], [0.70710678118654752, 0]],
                                [[0.70710678118654752, 0], [-0.70710678118654752, 0]]]}
    ],
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 3
  })");
  const auto channel = config.build_channel();
  CHECK(channel.dim() == 2);
  CHECK(channel.terms()[0].unitary.is_permutation());
  CHECK_FALSE(channel.terms()[1].unitary.is_permutation());

  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "unitaries": [{"prob": 1.0, "matrix": [[1, 1], [0, 1]]}],
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 1
  })")
                      .build_channel(),
                  ConfigError);
}

TEST_CASE("parse_complex_list accepts the documented forms") {
  const auto simple = parse_complex_list("1,-1");
  REQUIRE(simple.size() == 2);
  CHECK(simple[0] == Complex(1.0, 0.0));
  CHECK(simple[1] == Complex(-1.0, 0.0));

  const auto mixed = parse_complex_list(" 0.5+0.866i , 2i, -i, 1e-3+2e-4i ");
  REQUIRE(mixed.size() == 4);
  CHECK(mixed[0] == Complex(0.5, 0.866));
  CHECK(mixed[1] == Complex(0.0, 2.0));
  CHECK(mixed[2] == Complex(0.0, -1.0));
  CHECK(mixed[3] == Complex(1e-3, 2e-4));

  CHECK_THROWS_AS(parse_complex_list("abc"), ConfigError);
  CHECK_THROWS_AS(parse_complex_list("1,,2"), ConfigError);
}

TEST_CASE("curve runner classifies the two-qubit figure states") {
  const auto config = ExperimentConfig::from_json_text(fig2_config_text());
  const auto results = run_curve(config);
  REQUIRE(results.size() == 2);

  const CurveResult& weighted = results[0];
  CHECK_FALSE(weighted.stationary);
  // hand evaluation of the six X6 matrix elements against rho, including the
  // 1/sqrt(6) basis normalization: 2 * 0.3 * sin(2 pi / 35) / 1.09 / sqrt(6)
  const double expected = 0.6 * std::sin(2.0 * kPi / 35.0) / 1.09 / std::sqrt(6.0);
  CHECK(weighted.max_alternating_overlap == doctest::Approx(expected).epsilon(1e-10));

  const CurveResult& balanced = results[1];
  CHECK(balanced.stationary);
  CHECK(balanced.max_alternating_overlap < 1e-14);

  for (const CurveResult& r : results) {
    REQUIRE(r.points.size() == 31);
    double previous = r.points.front().distance;
    for (std::size_t k = 1; k < r.points.size(); ++k) {
      CHECK(r.points[k].distance <= previous + 1e-10);
      previous = r.points[k].distance;
    }
  }
}

TEST_CASE("the trace-norm curve metric is selectable and differs from HS") {
  auto config = ExperimentConfig::from_json_text(fig2_config_text());
  const auto hs = run_curve(config);
  config.use_trace_norm = true;
  const auto trace = run_curve(config);
  // the metrics are genuinely different, and the trace-norm column is also
  // monotone (the map is a trace-norm contraction)
  bool any_different = false;
  double previous = trace[0].points.front().distance;
  for (std::size_t k = 0; k < trace[0].points.size(); ++k) {
    CHECK(trace[0].points[k].distance >= 0.0);
    any_different = any_different ||
                    std::abs(trace[0].points[k].distance - hs[0].points[k].distance) > 1e-6;
    if (k > 0) {
      CHECK(trace[0].points[k].distance <= previous + 1e-10);
      previous = trace[0].points[k].distance;
    }
  }
  CHECK(any_different);

  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 2}, "distance": "manhattan",
    "initial_state": {"type": "maximally_mixed"}, "iterations": 1
  })"),
                  ConfigError);
}

TEST_CASE("curve CSV output is byte-deterministic") {
  const auto config = ExperimentConfig::from_json_text(fig2_config_text());
  const auto results = run_curve(config);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "rudyn_curve_a.csv").string();
  const std::string b = (dir / "rudyn_curve_b.csv").string();
  write_curve_csv(a, results[0]);
  write_curve_csv(b, results[0]);
  const std::string text = read_file(a);
  CHECK(text == read_file(b));
  CHECK(text.substr(0, 12) == "n,D,entropy\n");
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("output_path_for splices labels only for multi-state runs") {
  CHECK(output_path_for("out.csv", "weighted", false) == "out.csv");
  CHECK(output_path_for("out.csv", "weighted", true) == "out_weighted.csv");
  CHECK(output_path_for("dir.v1/out.csv", "a b", true) == "dir.v1/out_a_b.csv");
  CHECK(output_path_for("out", "x", true) == "out_x");
}

TEST_CASE("solve runner reports the two-qubit block structure") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 2},
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 1,
    "seed": 3
  })");
  const SolveReport report = run_solve(config);
  CHECK(report.pass);
  CHECK(report.total_dimension == 6);
  REQUIRE(report.blocks.size() == 2);
  CHECK(report.blocks[0].dimension == 5);
  CHECK(report.blocks[1].dimension == 1);
  CHECK(report.blocks[0].residual < 1e-9);
  CHECK(report.prob_max_projector_distance < 1e-8);
  CHECK(report.json_text().find("\"total_dimension\": 6") != std::string::npos);

  std::ostringstream out;
  report.print(out);
  CHECK(out.str().find("lambda=1: dim 5") != std::string::npos);
  CHECK(out.str().find("lambda=-1: dim 1") != std::string::npos);
}

TEST_CASE("verify runner passes on the documented green path") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "network": {"qubits": 3},
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 1,
    "seed": 5
  })");
  const VerifyReport report = run_verify(config);
  CHECK(report.all_pass());
  CHECK(report.checks.size() >= 9);
}

TEST_CASE("verify runner confirms the identity-in-set consequence") {
  const auto config = ExperimentConfig::from_json_text(R"({
    "unitaries": [
      {"prob": 0.5, "matrix": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]},
      {"prob": 0.5, "matrix": [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]}
    ],
    "initial_state": {"type": "maximally_mixed"},
    "iterations": 1,
    "seed": 5
  })");
  const VerifyReport report = run_verify(config);
  CHECK(report.all_pass());
  bool found = false;
  for (const VerifyCheck& c : report.checks) {
    found = found || c.name == "identity_in_set_all_lambda_one";
  }
  CHECK(found);
}

TEST_CASE("trajectory runner enforces its preconditions") {
  const std::string base = R"({
    "network": {"qubits": 2},
    "initial_state": {"type": "basis", "bits": "10"},
    "iterations": 5,
    "samples": 50
  })";
  auto no_mode = ExperimentConfig::from_json_text(base);
  no_mode.seed = 1;
  CHECK_THROWS_AS(run_trajectory(no_mode), ConfigError);  // mode is exact-map

  auto no_seed = ExperimentConfig::from_json_text(base);
  no_seed.mode = ExperimentConfig::Mode::kTrajectory;
  CHECK_THROWS_AS(run_trajectory(no_seed), ConfigError);
}

TEST_CASE("trajectory runner is deterministic and exact for one-term channels") {
  auto config = ExperimentConfig::from_json_text(R"({
    "unitaries": [{"prob": 1.0,
                   "matrix": [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]}],
    "initial_state": {"type": "basis", "bits": "01"},
    "iterations": 6,
    "samples": 20,
    "mode": "trajectory",
    "seed": 11
  })");
  const auto a = run_trajectory(config);
  const auto b = run_trajectory(config);
  REQUIRE(a.size() == 1);
  REQUIRE(a[0].points.size() == 7);
  for (std::size_t k = 0; k < a[0].points.size(); ++k) {
    CHECK(a[0].points[k].second == b[0].points[k].second);
    CHECK(a[0].points[k].second < 1e-14);  // single-branch channel has no sampling noise
  }
}

}  // TEST_SUITE
