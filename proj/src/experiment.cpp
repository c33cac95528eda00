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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace rudyn {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 123456789;
constexpr double kStationaryOverlapTol = 1e-9;
constexpr double kProbIndependenceTol = 1e-8;
constexpr int kProbResamples = 3;

[[noreturn]] void config_fail(const std::string& message) {
  throw ConfigError("configuration error: " + message);
}

Complex parse_complex_json(const json& v, const char* what) {
  if (v.is_number()) {
    return Complex(v.get<double>(), 0.0);
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
  config_fail(std::string(what) + " must be a number or an [re, im] pair");
}

ComplexMatrix parse_matrix_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    config_fail(std::string(what) + " must be a nonempty array of rows");
  }
  const auto n = Eigen::Index(rows.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = rows[std::size_t(r)];
    if (!row.is_array() || Eigen::Index(row.size()) != n) {
      config_fail(std::string(what) + " must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = parse_complex_json(row[std::size_t(c)], what);
    }
  }
  return m;
}

StateSpec parse_state_json(const json& v, std::size_t index) {
  if (!v.is_object()) {
    config_fail("initial state must be an object");
  }
  StateSpec spec;
  const std::string type = v.value("type", "");
  if (type == "basis") {
    spec.kind = StateSpec::Kind::kBasis;
    if (!v.contains("bits") || !v.at("bits").is_string()) {
      config_fail("basis state requires a \"bits\" string");
    }
    spec.bits = v.at("bits").get<std::string>();
    spec.label = v.value("label", spec.bits);
  } else if (type == "superposition") {
    spec.kind = StateSpec::Kind::kSuperposition;
    if (!v.contains("terms") || !v.at("terms").is_array() || v.at("terms").empty()) {
      config_fail("superposition state requires a nonempty \"terms\" array");
    }
    for (const json& t : v.at("terms")) {
      if (!t.is_object() || !t.contains("bits") || !t.contains("amplitude")) {
        config_fail("superposition terms need \"bits\" and \"amplitude\"");
      }
      spec.terms.push_back(
          {t.at("bits").get<std::string>(), parse_complex_json(t.at("amplitude"), "amplitude")});
    }
    spec.label = v.value("label", "state" + std::to_string(index));
  } else if (type == "maximally_mixed") {
    spec.kind = StateSpec::Kind::kMaximallyMixed;
    spec.label = v.value("label", "maximally_mixed");
  } else {
    config_fail("unknown initial-state type \"" + type +
                "\" (expected basis, superposition or maximally_mixed)");
  }
  if (spec.label.empty()) {
    spec.label = "state" + std::to_string(index);
  }
  return spec;
}

Eigen::Index bits_string_to_index(const std::string& bits, Eigen::Index dim) {
  if (bits.empty() || bits.size() > 24) {
    config_fail("bit strings must have between 1 and 24 characters");
  }
  std::vector<int> lsb_first;
  lsb_first.reserve(bits.size());
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
    if (*it != '0' && *it != '1') {
      config_fail("bit string \"" + bits + "\" may contain only 0 and 1");
    }
    lsb_first.push_back(*it == '1' ? 1 : 0);
  }
  if ((Eigen::Index(1) << bits.size()) != dim) {
    config_fail("bit string \"" + bits + "\" does not match the channel dimension " +
                std::to_string(dim));
  }
  return bits_to_index(lsb_first);
}

bool is_identity_up_to_phase(const UnitaryOperator& u) {
  if (u.is_permutation()) {
    const auto& perm = u.permutation();
    for (std::size_t z = 0; z < perm.size(); ++z) {
      if (perm[z] != Eigen::Index(z)) {
        return false;
      }
    }
    return true;
  }
  const ComplexMatrix m = u.to_dense();
  if (std::abs(std::abs(m(0, 0)) - 1.0) > 1e-9) {
    return false;
  }
  const Complex phase = m(0, 0) / std::abs(m(0, 0));
  return (m - phase * ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-9;
}

/// Recognizes exact 0/1 permutation matrices so user-supplied gates can use
/// the permutation fast paths.
std::optional<std::vector<Eigen::Index>> detect_permutation(const ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  std::vector<Eigen::Index> perm(std::size_t(d), -1);
  for (Eigen::Index col = 0; col < d; ++col) {
    Eigen::Index hit = -1;
    for (Eigen::Index row = 0; row < d; ++row) {
      const Complex v = m(row, col);
      if (std::abs(v - Complex(1.0, 0.0)) <= 1e-12) {
        if (hit >= 0) {
          return std::nullopt;
        }
        hit = row;
      } else if (std::abs(v) > 1e-12) {
        return std::nullopt;
      }
    }
    if (hit < 0) {
      return std::nullopt;
    }
    perm[std::size_t(col)] = hit;
  }
  return perm;
}

std::string format_eigenvalue(Complex lambda) {
  char buf[64];
  if (std::abs(lambda.imag()) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%g", lambda.real());
  } else {
    std::snprintf(buf, sizeof(buf), "%g%+gi", lambda.real(), lambda.imag());
  }
  return buf;
}

double block_residual(const AttractorBlock& block, const RandomUnitaryChannel& ch) {
  double worst = 0.0;
  for (const ComplexMatrix& x : block.basis) {
    const ComplexMatrix scaled = block.eigenvalue * x;
    for (const ChannelTerm& t : ch.terms()) {
      worst = std::max(worst, hs_distance(t.unitary.conjugate(x), scaled));
    }
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// StateSpec / ExperimentConfig
// ---------------------------------------------------------------------------

DensityMatrix StateSpec::build(Eigen::Index dim) const {
  switch (kind) {
    case Kind::kBasis:
      return DensityMatrix::basis_state(dim, bits_string_to_index(bits, dim));
    case Kind::kSuperposition: {
      ComplexVector psi = ComplexVector::Zero(dim);
      for (const Term& t : terms) {
        psi(bits_string_to_index(t.bits, dim)) += t.amplitude;
      }
      if (psi.norm() < 1e-9) {
        config_fail("superposition state \"" + label + "\" is numerically null");
      }
      return DensityMatrix::pure(psi);
    }
    case Kind::kMaximallyMixed:
      return DensityMatrix::maximally_mixed(dim);
  }
  throw std::logic_error("StateSpec::build: unreachable");
}

namespace {
ExperimentConfig parse_config_fields(const json& root);
}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    config_fail("cannot open config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return from_json_text(text.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    config_fail("top-level config must be a JSON object");
  }
  try {
    return parse_config_fields(root);
  } catch (const json::exception& e) {
    config_fail(std::string("malformed config value: ") + e.what());
  }
}

namespace {
ExperimentConfig parse_config_fields(const json& root) {
  ExperimentConfig config;

  const bool has_network = root.contains("network");
  const bool has_unitaries = root.contains("unitaries") || root.contains("unitaries_file");
  if (has_network == has_unitaries) {
    config_fail("exactly one of \"network\" or \"unitaries\"/\"unitaries_file\" is required");
  }

  if (has_network) {
    const json& net = root.at("network");
    if (!net.is_object() || !net.contains("qubits") ||
        !net.at("qubits").is_number_integer()) {
      config_fail("\"network\" requires an integer \"qubits\" field");
    }
    NetworkSpec spec;
    spec.n_qubits = net.at("qubits").get<int>();
    const std::string topology = net.value("topology", "cyclic");
    if (topology != "cyclic") {
      config_fail("unsupported topology \"" + topology + "\" (only cyclic)");
    }
    const std::string gates = net.value("gates", "cnot");
    if (gates != "cnot") {
      config_fail("unsupported gate family \"" + gates + "\" (only cnot)");
    }
    if (net.contains("probabilities")) {
      for (const json& p : net.at("probabilities")) {
        if (!p.is_number()) {
          config_fail("network probabilities must be numbers");
        }
        spec.probabilities.push_back(p.get<double>());
      }
    }
    if (net.contains("edges")) {
      for (const json& e : net.at("edges")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer()) {
          config_fail("network edges must be [control, target] index pairs");
        }
        config.network_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
      if (config.network_edges.empty()) {
        config_fail("\"edges\" must not be empty when present");
      }
    }
    config.network = std::move(spec);
  } else {
    json gate_list;
    if (root.contains("unitaries_file")) {
      const std::string path = root.at("unitaries_file").get<std::string>();
      std::ifstream in(path);
      if (!in) {
        config_fail("cannot open unitaries file: " + path);
      }
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        config_fail("invalid JSON in unitaries file: " + std::string(e.what()));
      }
      if (!doc.contains("unitaries")) {
        config_fail("unitaries file must contain a \"unitaries\" array");
      }
      gate_list = doc.at("unitaries");
    } else {
      gate_list = root.at("unitaries");
    }
    if (!gate_list.is_array() || gate_list.empty()) {
      config_fail("\"unitaries\" must be a nonempty array");
    }
    for (const json& g : gate_list) {
      if (!g.is_object() || !g.contains("prob") || !g.contains("matrix")) {
        config_fail("each unitary entry needs \"prob\" and \"matrix\"");
      }
      config.explicit_terms.emplace_back(g.at("prob").get<double>(),
                                         parse_matrix_json(g.at("matrix"), "unitary matrix"));
    }
  }

  if (root.contains("initial_state")) {
    config.states.push_back(parse_state_json(root.at("initial_state"), 0));
  }
  if (root.contains("initial_states")) {
    const json& list = root.at("initial_states");
    if (!list.is_array()) {
      config_fail("\"initial_states\" must be an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      config.states.push_back(parse_state_json(list[i], config.states.size()));
    }
  }

  if (root.contains("iterations")) {
    if (!root.at("iterations").is_number_integer()) {
      config_fail("\"iterations\" must be an integer");
    }
    config.iterations = root.at("iterations").get<long>();
  }
  if (config.iterations < 1) {
    config_fail("\"iterations\" must be at least 1");
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer()) {
      config_fail("\"seed\" must be an integer");
    }
    config.seed = root.at("seed").get<std::uint64_t>();
  }

  const std::string mode = root.value("mode", "exact-map");
  if (mode == "exact-map") {
    config.mode = ExperimentConfig::Mode::kExactMap;
  } else if (mode == "trajectory") {
    config.mode = ExperimentConfig::Mode::kTrajectory;
  } else {
    config_fail("unknown mode \"" + mode + "\" (expected exact-map or trajectory)");
  }

  if (root.contains("samples")) {
    config.samples = root.at("samples").get<long>();
    if (config.samples < 1) {
      config_fail("\"samples\" must be at least 1");
    }
  }

  const std::string distance = root.value("distance", "hs");
  if (distance == "trace") {
    config.use_trace_norm = true;
  } else if (distance != "hs") {
    config_fail("unknown distance \"" + distance + "\" (expected hs or trace)");
  }

  if (root.contains("candidates")) {
    std::vector<Complex> cands;
    for (const json& c : root.at("candidates")) {
      cands.push_back(parse_complex_json(c, "candidate eigenvalue"));
    }
    if (cands.empty()) {
      config_fail("\"candidates\" must not be empty when present");
    }
    config.candidates = std::move(cands);
  }

  config.output = root.value("output", "");
  return config;
}
}  // namespace

RandomUnitaryChannel ExperimentConfig::build_channel() const {
  try {
    if (network.has_value()) {
      if (!network_edges.empty()) {
        std::vector<double> probs = network->probabilities;
        if (probs.empty()) {
          probs.assign(network_edges.size(), 1.0 / double(network_edges.size()));
        }
        if (probs.size() != network_edges.size()) {
          config_fail("one probability per listed edge is required");
        }
        std::vector<ChannelTerm> terms;
        terms.reserve(network_edges.size());
        for (std::size_t k = 0; k < network_edges.size(); ++k) {
          terms.push_back({probs[k], cnot(network->n_qubits, network_edges[k].first,
                                          network_edges[k].second)});
        }
        return RandomUnitaryChannel(std::move(terms));
      }
      return build_cyclic_channel(*network);
    }
    std::vector<ChannelTerm> terms;
    terms.reserve(explicit_terms.size());
    for (const auto& [prob, matrix] : explicit_terms) {
      if (auto perm = detect_permutation(matrix)) {
        terms.push_back({prob, UnitaryOperator::from_permutation(std::move(*perm))});
      } else {
        terms.push_back({prob, UnitaryOperator::from_matrix(matrix)});
      }
    }
    return RandomUnitaryChannel(std::move(terms));
  } catch (const std::invalid_argument& e) {
    config_fail(e.what());
  }
}

std::vector<std::pair<std::string, DensityMatrix>> ExperimentConfig::build_states(
    Eigen::Index dim) const {
  if (states.empty()) {
    config_fail("at least one initial state is required");
  }
  std::vector<std::pair<std::string, DensityMatrix>> built;
  built.reserve(states.size());
  for (const StateSpec& spec : states) {
    built.emplace_back(spec.label, spec.build(dim));
  }
  return built;
}

std::optional<std::vector<Complex>> ExperimentConfig::effective_candidates() const {
  if (candidates.has_value()) {
    return candidates;
  }
  if (network.has_value()) {
    // Network CNOTs square to the identity, so the peripheral spectrum is
    // contained in {+1, -1}; skip the dense eigensolve.
    return std::vector<Complex>{Complex(1.0, 0.0), Complex(-1.0, 0.0)};
  }
  return std::nullopt;
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> values;
  std::size_t start = 0;
  auto parse_real = [](const std::string& s) -> double {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      config_fail("cannot parse number \"" + s + "\" in eigenvalue list");
    }
    if (used != s.size()) {
      config_fail("cannot parse number \"" + s + "\" in eigenvalue list");
    }
    return v;
  };
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) {
      end = text.size();
    }
    std::string tok = text.substr(start, end - start);
    tok.erase(std::remove_if(tok.begin(), tok.end(),
                             [](unsigned char c) { return std::isspace(c); }),
              tok.end());
    if (tok.empty()) {
      config_fail("empty entry in eigenvalue list");
    }
    if (tok.back() == 'i' || tok.back() == 'I') {
      tok.pop_back();
      // Split real and imaginary parts at the last sign that is not an
      // exponent sign and not leading.
      std::size_t split = std::string::npos;
      for (std::size_t k = tok.size(); k-- > 1;) {
        if ((tok[k] == '+' || tok[k] == '-') && tok[k - 1] != 'e' && tok[k - 1] != 'E') {
          split = k;
          break;
        }
      }
      if (split == std::string::npos) {
        std::string imag = tok;
        if (imag.empty() || imag == "+") {
          imag = "1";
        } else if (imag == "-") {
          imag = "-1";
        }
        values.emplace_back(0.0, parse_real(imag));
      } else {
        std::string imag = tok.substr(split);
        if (imag == "+") {
          imag = "1";
        } else if (imag == "-") {
          imag = "-1";
        }
        values.emplace_back(parse_real(tok.substr(0, split)), parse_real(imag));
      }
    } else {
      values.emplace_back(parse_real(tok), 0.0);
    }
    start = end + 1;
    if (end == text.size()) {
      break;
    }
  }
  if (values.empty()) {
    config_fail("eigenvalue list is empty");
  }
  return values;
}

// ---------------------------------------------------------------------------
// Sampling utilities
// ---------------------------------------------------------------------------

double gaussian(TrajectoryRng& rng) {
  // Box-Muller on the portable uniform source; one value per call keeps the
  // draw sequence easy to reason about.
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

DensityMatrix random_density_matrix(Eigen::Index dim, TrajectoryRng& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      g(i, j) = Complex(gaussian(rng), gaussian(rng));
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::trusted((rho + rho.adjoint()) / 2.0);
}

UnitaryOperator random_unitary(Eigen::Index dim, TrajectoryRng& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      g(i, j) = Complex(gaussian(rng), gaussian(rng));
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex rkk = r(k, k);
    if (std::abs(rkk) > 0.0) {
      q.col(k) *= rkk / std::abs(rkk);
    }
  }
  return UnitaryOperator::from_matrix(std::move(q));
}

std::vector<double> random_probabilities(std::size_t count, TrajectoryRng& rng) {
  std::vector<double> probs(count);
  double sum = 0.0;
  for (double& p : probs) {
    p = std::max(-std::log(1.0 - rng.uniform01()), 1e-9);
    sum += p;
  }
  for (double& p : probs) {
    p /= sum;
  }
  return probs;
}

// ---------------------------------------------------------------------------
// Solve
// ---------------------------------------------------------------------------

SolveReport run_solve(const ExperimentConfig& config) {
  const RandomUnitaryChannel channel = config.build_channel();
  const auto candidates = config.effective_candidates();
  const AttractorBasis basis = solve_attractors(channel, candidates);

  SolveReport report;
  report.dim = channel.dim();
  double worst_residual = 0.0;
  for (const AttractorBlock& block : basis.blocks()) {
    const double residual = block_residual(block, channel);
    worst_residual = std::max(worst_residual, residual);
    report.blocks.push_back({block.eigenvalue, Eigen::Index(block.basis.size()), residual});
  }
  report.total_dimension = basis.total_dimension();

  TrajectoryRng rng(config.seed.value_or(kDefaultSeed));
  if (channel.term_count() > 1) {
    report.prob_resamples = kProbResamples;
    for (int k = 0; k < kProbResamples; ++k) {
      const auto probs = random_probabilities(channel.term_count(), rng);
      const AttractorBasis resolved = solve_attractors(channel.with_probabilities(probs),
                                                       candidates);
      report.prob_max_projector_distance = std::max(
          report.prob_max_projector_distance, attractor_projector_distance(basis, resolved));
    }
  }

  report.cstar = verify_cstar_relations(basis);
  report.pass = worst_residual < tol::attractor_residual &&
                report.prob_max_projector_distance < kProbIndependenceTol &&
                report.cstar.all_pass();
  return report;
}

void SolveReport::print(std::ostream& out) const {
  out << "attractor solve (d = " << dim << ")\n";
  for (const SolveBlockInfo& b : blocks) {
    out << "  lambda=" << format_eigenvalue(b.eigenvalue) << ": dim " << b.dimension
        << "; residual " << b.residual << "\n";
  }
  out << "total attractor dimension: " << total_dimension << "\n";
  if (prob_resamples > 0) {
    out << "probability independence: max projector distance " << prob_max_projector_distance
        << " over " << prob_resamples << " resamples\n";
  }
  out << "cstar relations:\n" << cstar.summary();
  out << "result: " << (pass ? "PASS" : "FAIL") << "\n";
}

std::string SolveReport::json_text() const {
  json doc;
  doc["dim"] = dim;
  doc["total_dimension"] = total_dimension;
  doc["blocks"] = json::array();
  for (const SolveBlockInfo& b : blocks) {
    doc["blocks"].push_back({{"eigenvalue", {b.eigenvalue.real(), b.eigenvalue.imag()}},
                             {"dimension", b.dimension},
                             {"residual", b.residual}});
  }
  doc["probability_independence"] = {{"resamples", prob_resamples},
                                     {"max_projector_distance", prob_max_projector_distance}};
  doc["cstar"] = json::array();
  for (const CstarCheck& c : cstar.checks) {
    doc["cstar"].push_back(
        {{"name", c.name}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  doc["pass"] = pass;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Curve
// ---------------------------------------------------------------------------

std::vector<CurveResult> run_curve(const ExperimentConfig& config) {
  const RandomUnitaryChannel channel = config.build_channel();
  const AttractorBasis basis = solve_attractors(channel, config.effective_candidates());
  const auto states = config.build_states(channel.dim());

  std::vector<CurveResult> results;
  results.reserve(states.size());
  for (const auto& [label, rho] : states) {
    CurveResult result;
    result.label = label;
    for (const AttractorBlock& block : basis.blocks()) {
      if (std::abs(block.eigenvalue - Complex(1.0, 0.0)) < tol::eigenvalue_cluster) {
        continue;
      }
      for (const ComplexMatrix& x : block.basis) {
        result.max_alternating_overlap =
            std::max(result.max_alternating_overlap, std::abs(hs_inner(x, rho.matrix())));
      }
    }
    result.stationary = result.max_alternating_overlap < kStationaryOverlapTol;

    result.points.reserve(std::size_t(config.iterations) + 1);
    DensityMatrix state = rho;
    for (long n = 0; n <= config.iterations; ++n) {
      const ComplexMatrix target = asymptotic_state(basis, rho, n);
      const double d = config.use_trace_norm ? trace_distance(state.matrix(), target)
                                             : hs_distance(state.matrix(), target);
      result.points.push_back({n, d, von_neumann_entropy(state)});
      if (n < config.iterations) {
        state = rudyn::apply(channel, state);
      }
    }
    results.push_back(std::move(result));
  }
  return results;
}

// ---------------------------------------------------------------------------
// Verify
// ---------------------------------------------------------------------------

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.pass; });
}

void VerifyReport::print(std::ostream& out) const {
  for (const VerifyCheck& c : checks) {
    out << (c.pass ? "PASS" : "FAIL") << " " << c.name << " (worst " << c.worst << ", tol "
        << c.tolerance << ")\n";
  }
  out << "result: " << (all_pass() ? "PASS" : "FAIL") << "\n";
}

VerifyReport run_verify(const ExperimentConfig& config) {
  const RandomUnitaryChannel channel = config.build_channel();
  const Eigen::Index d = channel.dim();
  TrajectoryRng rng(config.seed.value_or(kDefaultSeed));

  constexpr int kCases = 20;
  std::vector<DensityMatrix> rhos;
  rhos.reserve(kCases);
  for (int k = 0; k < kCases; ++k) {
    rhos.push_back(random_density_matrix(d, rng));
  }

  VerifyReport report;
  auto add = [&report](const std::string& name, double worst, double tolerance) {
    report.checks.push_back({name, worst, tolerance, worst < tolerance});
  };

  double trace_worst = 0.0;
  double entropy_worst = 0.0;
  for (const DensityMatrix& rho : rhos) {
    const DensityMatrix mapped = rudyn::apply(channel, rho);
    trace_worst = std::max(trace_worst, std::abs(mapped.matrix().trace() - Complex(1.0, 0.0)));
    entropy_worst = std::max(
        entropy_worst, std::max(0.0, von_neumann_entropy(rho) - von_neumann_entropy(mapped)));
  }
  add("trace_preservation", trace_worst, tol::trace);
  add("entropy_monotonicity", entropy_worst, 1e-9);

  const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / double(d);
  add("unitality", hs_distance(rudyn::apply(channel, mixed), mixed), 1e-12);

  double contraction_worst = 0.0;
  for (int k = 0; k + 1 < kCases; k += 2) {
    const double before = hs_distance(rhos[k].matrix(), rhos[k + 1].matrix());
    const double after =
        hs_distance(rudyn::apply(channel, rhos[k].matrix()), rudyn::apply(channel, rhos[k + 1].matrix()));
    contraction_worst = std::max(contraction_worst, after - before);
  }
  add("hs_contraction", contraction_worst, 1e-12);

  double duality_worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    ComplexMatrix a(d, d), b(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        a(i, j) = Complex(gaussian(rng), gaussian(rng));
        b(i, j) = Complex(gaussian(rng), gaussian(rng));
      }
    }
    a /= a.norm();
    b /= b.norm();
    duality_worst = std::max(
        duality_worst, std::abs(hs_inner(apply_adjoint(channel, a), b) -
                                hs_inner(a, rudyn::apply(channel, b))));
  }
  add("adjoint_duality", duality_worst, 1e-10);

  const AttractorBasis basis = solve_attractors(channel, config.effective_candidates());
  double idem_worst = 0.0;
  double commute_worst = 0.0;
  for (const DensityMatrix& rho : rhos) {
    const ComplexMatrix projected = project(basis, rho);
    idem_worst = std::max(idem_worst, hs_distance(project(basis, projected), projected));
    commute_worst = std::max(
        commute_worst, hs_distance(rudyn::apply(channel, projected), project(basis, rudyn::apply(channel, rho))));
  }
  add("projection_idempotence", idem_worst, 1e-10);
  add("projection_commutation", commute_worst, tol::attractor_residual);

  add("eigenvalue_equation_residual", eigenvalue_equation_residual(basis, channel),
      tol::attractor_residual);

  const CstarReport cstar = verify_cstar_relations(basis);
  double cstar_worst = 0.0;
  for (const CstarCheck& c : cstar.checks) {
    cstar_worst = std::max(cstar_worst, c.worst);
  }
  add("cstar_relations", cstar_worst, tol::cstar);

  if (channel.term_count() > 1) {
    double prob_worst = 0.0;
    for (int k = 0; k < kProbResamples; ++k) {
      const auto probs = random_probabilities(channel.term_count(), rng);
      const AttractorBasis resolved =
          solve_attractors(channel.with_probabilities(probs), config.effective_candidates());
      prob_worst = std::max(prob_worst, attractor_projector_distance(basis, resolved));
    }
    add("probability_independence", prob_worst, kProbIndependenceTol);
  }

  const bool has_identity =
      std::any_of(channel.terms().begin(), channel.terms().end(),
                  [](const ChannelTerm& t) { return is_identity_up_to_phase(t.unitary); });
  if (has_identity) {
    double lambda_worst = 0.0;
    for (const AttractorBlock& block : basis.blocks()) {
      lambda_worst = std::max(lambda_worst, std::abs(block.eigenvalue - Complex(1.0, 0.0)));
    }
    add("identity_in_set_all_lambda_one", lambda_worst, tol::eigenvalue_cluster);
  }

  return report;
}

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

std::vector<TrajectoryResult> run_trajectory(const ExperimentConfig& config) {
  if (config.mode != ExperimentConfig::Mode::kTrajectory) {
    config_fail("the trajectory command requires \"mode\": \"trajectory\"");
  }
  if (!config.seed.has_value()) {
    config_fail("trajectory mode requires an explicit seed (reproducibility contract)");
  }
  const RandomUnitaryChannel channel = config.build_channel();
  const auto states = config.build_states(channel.dim());
  const Eigen::Index d = channel.dim();

  TrajectoryRng rng(*config.seed);
  std::vector<TrajectoryResult> results;
  results.reserve(states.size());
  for (const auto& [label, rho] : states) {
    const auto steps = std::size_t(config.iterations) + 1;
    std::vector<ComplexMatrix> sums(steps, ComplexMatrix::Zero(d, d));
    for (long s = 0; s < config.samples; ++s) {
      ComplexMatrix current = rho.matrix();
      sums[0] += current;
      for (long n = 1; n < long(steps); ++n) {
        current = channel.terms()[rng.sample_term(channel)].unitary.conjugate(current);
        sums[std::size_t(n)] += current;
      }
    }
    TrajectoryResult result;
    result.label = label;
    DensityMatrix exact = rho;
    for (long n = 0; n < long(steps); ++n) {
      result.points.emplace_back(
          n, hs_distance(sums[std::size_t(n)] / double(config.samples), exact.matrix()));
      if (n + 1 < long(steps)) {
        exact = rudyn::apply(channel, exact);
      }
    }
    results.push_back(std::move(result));
  }
  return results;
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string output_path_for(const std::string& base, const std::string& label, bool multi) {
  if (!multi) {
    return base;
  }
  std::string clean;
  clean.reserve(label.size());
  for (char c : label) {
    clean.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c
                                                                                        : '_');
  }
  const std::size_t slash = base.find_last_of('/');
  const std::size_t dot = base.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return base + "_" + clean;
  }
  return base.substr(0, dot) + "_" + clean + base.substr(dot);
}

namespace {
std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    config_fail("cannot write output file: " + path);
  }
  return out;
}
}  // namespace

void write_curve_csv(const std::string& path, const CurveResult& result) {
  std::ofstream out = open_output(path);
  out << "n,D,entropy\n";
  for (const CurvePoint& p : result.points) {
    out << p.n << "," << format_double(p.distance) << "," << format_double(p.entropy) << "\n";
  }
}

void write_trajectory_csv(const std::string& path, const TrajectoryResult& result) {
  std::ofstream out = open_output(path);
  out << "n,D\n";
  for (const auto& [n, distance] : result.points) {
    out << n << "," << format_double(distance) << "\n";
  }
}

}  // namespace rudyn
