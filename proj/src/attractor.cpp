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

#include "rudyn/attractor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <sstream>

namespace rudyn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double phase_key(Complex lambda) {
  double a = std::arg(lambda);
  if (a < -1e-12) {
    a += 2.0 * kPi;
  }
  return a;
}

Complex unit_circle(Complex lambda) {
  return lambda / std::abs(lambda);
}

/// lambda^n for integer n, exact for lambda = +-1.
Complex int_pow(Complex lambda, long n) {
  Complex result(1.0, 0.0);
  Complex base = lambda;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) {
      result *= base;
    }
    base *= base;
  }
  return result;
}

/// Cluster unit-circle values within tol::eigenvalue_cluster and return the
/// representatives sorted by phase in [0, 2pi).
std::vector<Complex> cluster_on_circle(std::vector<Complex> values) {
  if (values.empty()) {
    return values;
  }
  std::sort(values.begin(), values.end(),
            [](Complex a, Complex b) { return phase_key(a) < phase_key(b); });
  std::vector<std::vector<Complex>> groups;
  for (Complex v : values) {
    if (!groups.empty() && std::abs(v - groups.back().back()) < tol::eigenvalue_cluster) {
      groups.back().push_back(v);
    } else {
      groups.push_back({v});
    }
  }
  // The circle wraps: the first and last group may straddle phase 0.
  if (groups.size() > 1 &&
      std::abs(groups.front().front() - groups.back().back()) < tol::eigenvalue_cluster) {
    for (Complex v : groups.back()) {
      groups.front().push_back(v);
    }
    groups.pop_back();
  }
  std::vector<Complex> reps;
  reps.reserve(groups.size());
  for (const auto& g : groups) {
    Complex mean(0.0, 0.0);
    for (Complex v : g) {
      mean += v;
    }
    reps.push_back(unit_circle(mean / double(g.size())));
  }
  std::sort(reps.begin(), reps.end(),
            [](Complex a, Complex b) { return phase_key(a) < phase_key(b); });
  return reps;
}

std::vector<ComplexMatrix> nullspace_stacked_svd(const RandomUnitaryChannel& ch,
                                                 Complex lambda) {
  const Eigen::Index d = ch.dim();
  const Eigen::Index d2 = d * d;
  const Eigen::Index rows = Eigen::Index(ch.term_count()) * d2;
  ComplexMatrix stacked = ComplexMatrix::Zero(rows, d2);
  Eigen::Index row0 = 0;
  for (const ChannelTerm& t : ch.terms()) {
    if (t.unitary.is_permutation()) {
      const auto& u = t.unitary.permutation();
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
          const Eigen::Index col = i + d * j;
          stacked(row0 + u[std::size_t(i)] + d * u[std::size_t(j)], col) += 1.0;
          stacked(row0 + col, col) -= lambda;
        }
      }
    } else {
      stacked.block(row0, 0, d2, d2) =
          conjugation_superoperator(t.unitary.to_dense()) -
          lambda * ComplexMatrix::Identity(d2, d2);
    }
    row0 += d2;
  }
  Eigen::BDCSVD<ComplexMatrix> svd(stacked, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol::nullspace_rel * sv(0);
  Eigen::Index first_null = sv.size();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cutoff) {
      first_null = k;
      break;
    }
  }
  std::vector<ComplexMatrix> basis;
  basis.reserve(std::size_t(sv.size() - first_null));
  for (Eigen::Index k = first_null; k < sv.size(); ++k) {
    basis.push_back(unvec(svd.matrixV().col(k), d));
  }
  return basis;
}

/// Exact solver for channels whose unitaries are basis permutations. The
/// constraint U X U† = lambda X reads X(u(i), u(j)) = conj(lambda) X(i, j),
/// so solutions are supported on orbits of the pair action; an orbit carries
/// a (one-dimensional) solution exactly when the phase cocycle closes.
std::vector<ComplexMatrix> nullspace_permutation_orbits(const RandomUnitaryChannel& ch,
                                                        Complex lambda) {
  const Eigen::Index d = ch.dim();
  const Eigen::Index n_pairs = d * d;
  std::vector<std::vector<Eigen::Index>> gens;
  std::vector<std::vector<Eigen::Index>> inv_gens;
  for (const ChannelTerm& t : ch.terms()) {
    const auto& u = t.unitary.permutation();
    std::vector<Eigen::Index> inv(u.size());
    for (std::size_t z = 0; z < u.size(); ++z) {
      inv[std::size_t(u[z])] = Eigen::Index(z);
    }
    gens.push_back(u);
    inv_gens.push_back(std::move(inv));
  }

  std::vector<char> visited(std::size_t(n_pairs), 0);
  std::vector<Complex> phase(static_cast<std::size_t>(n_pairs));
  std::vector<ComplexMatrix> basis;
  std::vector<Eigen::Index> orbit;
  std::deque<Eigen::Index> queue;

  for (Eigen::Index root = 0; root < n_pairs; ++root) {
    if (visited[std::size_t(root)]) {
      continue;
    }
    orbit.clear();
    queue.clear();
    visited[std::size_t(root)] = 1;
    phase[std::size_t(root)] = Complex(1.0, 0.0);
    queue.push_back(root);
    orbit.push_back(root);
    bool consistent = true;
    while (!queue.empty()) {
      const Eigen::Index p = queue.front();
      queue.pop_front();
      const Eigen::Index i = p % d;
      const Eigen::Index j = p / d;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const Eigen::Index fwd = gens[g][std::size_t(i)] + d * gens[g][std::size_t(j)];
        const Eigen::Index bwd = inv_gens[g][std::size_t(i)] + d * inv_gens[g][std::size_t(j)];
        const Complex fwd_phase = std::conj(lambda) * phase[std::size_t(p)];
        const Complex bwd_phase = lambda * phase[std::size_t(p)];
        for (const auto& [q, expected] :
             {std::pair{fwd, fwd_phase}, std::pair{bwd, bwd_phase}}) {
          if (!visited[std::size_t(q)]) {
            visited[std::size_t(q)] = 1;
            phase[std::size_t(q)] = expected;
            queue.push_back(q);
            orbit.push_back(q);
          } else if (std::abs(phase[std::size_t(q)] - expected) > tol::attractor_residual) {
            consistent = false;
          }
        }
      }
    }
    if (consistent) {
      ComplexMatrix x = ComplexMatrix::Zero(d, d);
      const double norm = std::sqrt(double(orbit.size()));
      for (Eigen::Index p : orbit) {
        x(p % d, p / d) = phase[std::size_t(p)] / norm;
      }
      basis.push_back(std::move(x));
    }
  }
  return basis;
}

ComplexMatrix stack_basis(const AttractorBasis& basis) {
  const Eigen::Index d2 = basis.dim() * basis.dim();
  ComplexMatrix b(d2, basis.total_dimension());
  Eigen::Index col = 0;
  for (const AttractorBlock& blk : basis.blocks()) {
    for (const ComplexMatrix& x : blk.basis) {
      b.col(col++) = Eigen::Map<const ComplexVector>(x.data(), d2);
    }
  }
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// AttractorBasis
// ---------------------------------------------------------------------------

AttractorBasis::AttractorBasis(Eigen::Index dim, std::vector<AttractorBlock> blocks)
    : dim_(dim), blocks_(std::move(blocks)) {
  if (dim_ <= 0) {
    throw std::invalid_argument("AttractorBasis: dimension must be positive");
  }
  for (const AttractorBlock& blk : blocks_) {
    if (std::abs(std::abs(blk.eigenvalue) - 1.0) > tol::peripheral_band) {
      throw std::invalid_argument("AttractorBasis: eigenvalue is not unit modulus");
    }
    if (blk.basis.empty()) {
      throw std::invalid_argument("AttractorBasis: empty eigenvalue block");
    }
    for (const ComplexMatrix& x : blk.basis) {
      if (x.rows() != dim_ || x.cols() != dim_) {
        throw std::invalid_argument("AttractorBasis: basis element has wrong dimension");
      }
    }
  }
  for (std::size_t a = 0; a < blocks_.size(); ++a) {
    for (std::size_t b = a + 1; b < blocks_.size(); ++b) {
      if (std::abs(blocks_[a].eigenvalue - blocks_[b].eigenvalue) < tol::eigenvalue_cluster) {
        throw std::invalid_argument("AttractorBasis: duplicate eigenvalue blocks");
      }
    }
  }
  if (total_dimension() > 0) {
    ComplexMatrix b = stack_basis(*this);
    const double gram_dev =
        (b.adjoint() * b - ComplexMatrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
    if (gram_dev > tol::attractor_residual) {
      throw std::invalid_argument("AttractorBasis: basis is not orthonormal across blocks");
    }
    // Adjoint closure: X† of a lambda block must lie in the conj(lambda) span.
    for (const AttractorBlock& blk : blocks_) {
      const AttractorBlock* partner = find_block(std::conj(blk.eigenvalue));
      if (partner == nullptr || partner->basis.size() != blk.basis.size()) {
        throw std::invalid_argument(
            "AttractorBasis: missing or mismatched conjugate block for an eigenvalue");
      }
      for (const ComplexMatrix& x : blk.basis) {
        ComplexMatrix residual = x.adjoint();
        for (const ComplexMatrix& y : partner->basis) {
          residual -= hs_inner(y, x.adjoint()) * y;
        }
        if (hs_norm(residual) > tol::attractor_residual) {
          throw std::invalid_argument(
              "AttractorBasis: block spans are not closed under the adjoint map");
        }
      }
    }
  }
}

Eigen::Index AttractorBasis::total_dimension() const {
  Eigen::Index total = 0;
  for (const AttractorBlock& blk : blocks_) {
    total += Eigen::Index(blk.basis.size());
  }
  return total;
}

const AttractorBlock* AttractorBasis::find_block(Complex lambda) const {
  for (const AttractorBlock& blk : blocks_) {
    if (std::abs(blk.eigenvalue - lambda) < tol::eigenvalue_cluster) {
      return &blk;
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Solver operations
// ---------------------------------------------------------------------------

std::vector<Complex> peripheral_eigenvalues(const RandomUnitaryChannel& ch) {
  ComplexMatrix m = superoperator(ch);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("peripheral_eigenvalues: eigensolver failed to converge");
  }
  std::vector<Complex> peripheral;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex ev = es.eigenvalues()(k);
    if (std::abs(ev) > 1.0 - tol::peripheral_band) {
      peripheral.push_back(unit_circle(ev));
    }
  }
  std::vector<Complex> reps = cluster_on_circle(std::move(peripheral));
  const bool has_one = std::any_of(reps.begin(), reps.end(), [](Complex v) {
    return std::abs(v - Complex(1.0, 0.0)) < tol::eigenvalue_cluster;
  });
  if (!has_one) {
    // Unital channels always fix 1/d; guard against filtering noise.
    reps.insert(reps.begin(), Complex(1.0, 0.0));
  }
  return reps;
}

std::vector<ComplexMatrix> common_eigenspace(const RandomUnitaryChannel& ch, Complex lambda,
                                             NullspaceRoute route) {
  if (std::abs(std::abs(lambda) - 1.0) > tol::peripheral_band) {
    throw std::invalid_argument("common_eigenspace: eigenvalue must lie on the unit circle");
  }
  lambda = unit_circle(lambda);
  const Eigen::Index d2 = ch.dim() * ch.dim();

  NullspaceRoute resolved = route;
  if (resolved == NullspaceRoute::kAuto) {
    if (d2 <= limits::stacked_svd) {
      resolved = NullspaceRoute::kStackedSvd;
    } else if (ch.all_permutations()) {
      resolved = NullspaceRoute::kPermutationOrbit;
    } else if (d2 <= limits::dense_superoperator) {
      resolved = NullspaceRoute::kStackedSvd;
    } else {
      throw CapacityError("common_eigenspace: operator-space dimension " + std::to_string(d2) +
                          " exceeds the dense limit " +
                          std::to_string(limits::dense_superoperator) +
                          " and the channel is not permutation-backed");
    }
  }
  switch (resolved) {
    case NullspaceRoute::kStackedSvd:
      if (d2 > limits::dense_superoperator) {
        throw CapacityError("common_eigenspace: stacked SVD requested above the dense limit " +
                            std::to_string(limits::dense_superoperator));
      }
      return nullspace_stacked_svd(ch, lambda);
    case NullspaceRoute::kPermutationOrbit:
      if (!ch.all_permutations()) {
        throw std::invalid_argument(
            "common_eigenspace: orbit route requires permutation-backed unitaries");
      }
      return nullspace_permutation_orbits(ch, lambda);
    case NullspaceRoute::kAuto:
      break;
  }
  throw std::logic_error("common_eigenspace: unreachable route");
}

AttractorBasis solve_attractors(const RandomUnitaryChannel& ch,
                                std::optional<std::vector<Complex>> candidates,
                                NullspaceRoute route) {
  std::vector<Complex> cands;
  if (candidates.has_value()) {
    if (candidates->empty()) {
      throw std::invalid_argument("solve_attractors: candidate list must not be empty");
    }
    for (Complex c : *candidates) {
      if (std::abs(std::abs(c) - 1.0) > tol::peripheral_band) {
        throw std::invalid_argument(
            "solve_attractors: candidate eigenvalues must lie on the unit circle");
      }
      cands.push_back(unit_circle(c));
      // Close under conjugation so the adjoint-pairing invariant can hold.
      cands.push_back(std::conj(unit_circle(c)));
    }
    cands = cluster_on_circle(std::move(cands));
  } else {
    cands = peripheral_eigenvalues(ch);
  }

  std::vector<AttractorBlock> blocks;
  for (Complex lambda : cands) {
    std::vector<ComplexMatrix> basis = common_eigenspace(ch, lambda, route);
    if (!basis.empty()) {
      blocks.push_back({lambda, std::move(basis)});
    }
  }
  AttractorBasis result(ch.dim(), std::move(blocks));
  const double residual = eigenvalue_equation_residual(result, ch);
  if (residual > tol::attractor_residual) {
    throw std::runtime_error("solve_attractors: eigenvalue-equation residual " +
                             std::to_string(residual) + " exceeds tolerance");
  }
  return result;
}

ComplexMatrix project(const AttractorBasis& basis, const ComplexMatrix& a) {
  if (a.rows() != basis.dim() || a.cols() != basis.dim()) {
    throw std::invalid_argument("project: operator dimension does not match basis");
  }
  ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (const AttractorBlock& blk : basis.blocks()) {
    for (const ComplexMatrix& x : blk.basis) {
      out += hs_inner(x, a) * x;
    }
  }
  return out;
}

ComplexMatrix project(const AttractorBasis& basis, const DensityMatrix& rho) {
  return project(basis, rho.matrix());
}

ComplexMatrix asymptotic_state(const AttractorBasis& basis, const ComplexMatrix& a, long n) {
  if (n < 0) {
    throw std::invalid_argument("asymptotic_state: iteration count must be nonnegative");
  }
  if (a.rows() != basis.dim() || a.cols() != basis.dim()) {
    throw std::invalid_argument("asymptotic_state: operator dimension does not match basis");
  }
  ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (const AttractorBlock& blk : basis.blocks()) {
    const Complex factor = int_pow(blk.eigenvalue, n);
    for (const ComplexMatrix& x : blk.basis) {
      out += factor * hs_inner(x, a) * x;
    }
  }
  return out;
}

ComplexMatrix asymptotic_state(const AttractorBasis& basis, const DensityMatrix& rho, long n) {
  return asymptotic_state(basis, rho.matrix(), n);
}

double eigenvalue_equation_residual(const AttractorBasis& basis,
                                    const RandomUnitaryChannel& ch) {
  if (basis.dim() != ch.dim()) {
    throw std::invalid_argument("eigenvalue_equation_residual: dimension mismatch");
  }
  double worst = 0.0;
  for (const AttractorBlock& blk : basis.blocks()) {
    for (const ComplexMatrix& x : blk.basis) {
      const ComplexMatrix scaled = blk.eigenvalue * x;
      for (const ChannelTerm& t : ch.terms()) {
        worst = std::max(worst, hs_distance(t.unitary.conjugate(x), scaled));
      }
    }
  }
  return worst;
}

double attractor_projector_distance(const AttractorBasis& a, const AttractorBasis& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("attractor_projector_distance: dimension mismatch");
  }
  // For orthonormal spanning sets, ||P - Q||_F^2 equals the sum of squared
  // residuals of each basis projected against the other span. Residual
  // vectors are formed explicitly, so near-identical spans evaluate to ~1e-14
  // instead of drowning in the cancellation of rank(P) + rank(Q) - 2 Tr(PQ).
  const ComplexMatrix ba = stack_basis(a);
  const ComplexMatrix bb = stack_basis(b);
  const ComplexMatrix res_a = ba - bb * (bb.adjoint() * ba);
  const ComplexMatrix res_b = bb - ba * (ba.adjoint() * bb);
  return std::sqrt(res_a.squaredNorm() + res_b.squaredNorm());
}

// ---------------------------------------------------------------------------
// C*-relation report
// ---------------------------------------------------------------------------

bool CstarReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CstarCheck& c) { return c.pass; });
}

std::string CstarReport::summary() const {
  std::ostringstream out;
  for (const CstarCheck& c : checks) {
    out << (c.pass ? "PASS" : "FAIL") << " " << c.name << " (worst " << c.worst << ", tol "
        << c.tolerance << ")\n";
  }
  return out.str();
}

CstarReport verify_cstar_relations(const AttractorBasis& basis) {
  CstarReport report;

  double modulus_worst = 0.0;
  for (const AttractorBlock& blk : basis.blocks()) {
    modulus_worst = std::max(modulus_worst, std::abs(std::abs(blk.eigenvalue) - 1.0));
  }
  report.checks.push_back(
      {"unit_modulus", modulus_worst, tol::cstar, modulus_worst < tol::cstar});

  double pairing_worst = 0.0;
  for (const AttractorBlock& blk : basis.blocks()) {
    const AttractorBlock* partner = basis.find_block(std::conj(blk.eigenvalue));
    for (const ComplexMatrix& x : blk.basis) {
      ComplexMatrix residual = x.adjoint();
      if (partner != nullptr) {
        for (const ComplexMatrix& y : partner->basis) {
          residual -= hs_inner(y, x.adjoint()) * y;
        }
      }
      pairing_worst = std::max(pairing_worst, hs_norm(residual));
    }
  }
  report.checks.push_back(
      {"adjoint_pairing", pairing_worst, tol::cstar, pairing_worst < tol::cstar});

  // Powers of basis elements stay in the algebra with multiplied eigenvalues,
  // so Tr(X^n Y^m) must vanish unless lambda^n mu^m = 1.
  constexpr int kMaxPower = 3;
  double trace_worst = 0.0;
  std::vector<std::vector<std::array<ComplexMatrix, kMaxPower>>> powers;
  powers.reserve(basis.blocks().size());
  for (const AttractorBlock& blk : basis.blocks()) {
    std::vector<std::array<ComplexMatrix, kMaxPower>> block_powers;
    for (const ComplexMatrix& x : blk.basis) {
      std::array<ComplexMatrix, kMaxPower> p;
      p[0] = x;
      for (int e = 1; e < kMaxPower; ++e) {
        p[e] = p[e - 1] * x;
      }
      block_powers.push_back(std::move(p));
    }
    powers.push_back(std::move(block_powers));
  }
  for (std::size_t ba = 0; ba < basis.blocks().size(); ++ba) {
    for (std::size_t bb = 0; bb < basis.blocks().size(); ++bb) {
      const Complex la = basis.blocks()[ba].eigenvalue;
      const Complex lb = basis.blocks()[bb].eigenvalue;
      for (int n = 1; n <= kMaxPower; ++n) {
        for (int m = 1; m <= kMaxPower; ++m) {
          if (std::abs(int_pow(la, n) * int_pow(lb, m) - Complex(1.0, 0.0)) <= tol::cstar) {
            continue;
          }
          for (const auto& xp : powers[ba]) {
            for (const auto& yp : powers[bb]) {
              trace_worst =
                  std::max(trace_worst, std::abs((xp[n - 1] * yp[m - 1]).trace()));
            }
          }
        }
      }
    }
  }
  report.checks.push_back(
      {"trace_orthogonality", trace_worst, tol::cstar, trace_worst < tol::cstar});
  return report;
}

}  // namespace rudyn
