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

#include <Eigen/LU>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rudyn/experiment.hpp"
#include "rudyn/qubit_network.hpp"

using namespace rudyn;

namespace {

RandomUnitaryChannel cyclic(int n, std::vector<double> probs = {}) {
  NetworkSpec spec;
  spec.n_qubits = n;
  spec.probabilities = std::move(probs);
  return build_cyclic_channel(spec);
}

ComplexMatrix analytic_x6_normalized() {
  ComplexMatrix x = ComplexMatrix::Zero(4, 4);
  x(1, 2) = -1.0;
  x(1, 3) = 1.0;
  x(2, 1) = 1.0;
  x(2, 3) = -1.0;
  x(3, 1) = -1.0;
  x(3, 2) = 1.0;
  return x / std::sqrt(6.0);
}

/// Independent null-space oracle: the stacked constraint matrix is built by
/// brute index loops and its kernel is computed with a rank-revealing LU
/// factorization, a different algorithm from both shipped routes.
ComplexMatrix stacked_constraints_brute(const RandomUnitaryChannel& ch, Complex lambda) {
  const Eigen::Index d = ch.dim();
  const Eigen::Index d2 = d * d;
  ComplexMatrix stacked = ComplexMatrix::Zero(Eigen::Index(ch.term_count()) * d2, d2);
  Eigen::Index row0 = 0;
  for (const ChannelTerm& t : ch.terms()) {
    const ComplexMatrix u = t.unitary.to_dense();
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index l = 0; l < d; ++l) {
          for (Eigen::Index k = 0; k < d; ++k) {
            // row (k + d*l), column (i + d*j): entry U(k,i) conj(U(l,j))
            stacked(row0 + k + d * l, i + d * j) += u(k, i) * std::conj(u(l, j));
          }
        }
        stacked(row0 + i + d * j, i + d * j) -= lambda;
      }
    }
    row0 += d2;
  }
  return stacked;
}

void check_against_lu_kernel(const RandomUnitaryChannel& ch, Complex lambda,
                             const std::vector<ComplexMatrix>& basis) {
  const ComplexMatrix stacked = stacked_constraints_brute(ch, lambda);
  Eigen::FullPivLU<ComplexMatrix> lu(stacked);
  lu.setThreshold(1e-10);
  const ComplexMatrix kernel = lu.kernel();
  const bool empty_kernel = kernel.cols() == 1 && kernel.norm() < 1e-12;
  const Eigen::Index kernel_dim = empty_kernel ? 0 : kernel.cols();
  REQUIRE(Eigen::Index(basis.size()) == kernel_dim);
  // every solver element annihilates the brute constraints
  for (const ComplexMatrix& x : basis) {
    CHECK((stacked * vec(x)).norm() < 1e-10);
  }
  // every kernel vector is reproduced by the solver span
  for (Eigen::Index c = 0; c < kernel_dim; ++c) {
    ComplexVector v = kernel.col(c);
    v /= v.norm();
    ComplexVector residual = v;
    for (const ComplexMatrix& x : basis) {
      const ComplexVector bx = vec(x);
      residual -= (bx.adjoint() * v).value() * bx;
    }
    CHECK(residual.norm() < 1e-9);
  }
}

}  // namespace

TEST_SUITE("attractor") {

TEST_CASE("identity channel: trivial spectrum and full attractor space") {
  std::vector<Eigen::Index> id_perm(4);
  std::iota(id_perm.begin(), id_perm.end(), 0);
  const RandomUnitaryChannel ch({{1.0, UnitaryOperator::from_permutation(id_perm)}});

  const auto evs = peripheral_eigenvalues(ch);
  REQUIRE(evs.size() == 1);
  CHECK(std::abs(evs[0] - Complex(1.0, 0.0)) < 1e-12);

  const auto space = common_eigenspace(ch, Complex(1.0, 0.0));
  CHECK(space.size() == 16);

  const AttractorBasis basis = solve_attractors(ch);
  REQUIRE(basis.blocks().size() == 1);
  CHECK(basis.total_dimension() == 16);
}

TEST_CASE("two-qubit network has peripheral spectrum {1, -1}") {
  const auto evs = peripheral_eigenvalues(cyclic(2));
  REQUIRE(evs.size() == 2);
  CHECK(std::abs(evs[0] - Complex(1.0, 0.0)) < 1e-9);
  CHECK(std::abs(evs[1] - Complex(-1.0, 0.0)) < 1e-9);
}

TEST_CASE("three-qubit network has only lambda = 1") {
  const auto evs = peripheral_eigenvalues(cyclic(3));
  REQUIRE(evs.size() == 1);
  CHECK(std::abs(evs[0] - Complex(1.0, 0.0)) < 1e-9);
  CHECK(common_eigenspace(cyclic(3), Complex(-1.0, 0.0)).empty());
}

TEST_CASE("the N = 2 alternating eigenspace is spanned by the closed-form operator") {
  const auto space = common_eigenspace(cyclic(2), Complex(-1.0, 0.0));
  REQUIRE(space.size() == 1);
  CHECK(std::abs(std::abs(hs_inner(analytic_x6_normalized(), space[0])) - 1.0) < 1e-10);
}

TEST_CASE("SVD and orbit routes agree on the attractor projector") {
  const std::vector<Complex> pm{Complex(1.0, 0.0), Complex(-1.0, 0.0)};
  for (int n : {2, 3, 4}) {
    const auto ch = cyclic(n);
    const AttractorBasis via_svd = solve_attractors(ch, pm, NullspaceRoute::kStackedSvd);
    const AttractorBasis via_orbit = solve_attractors(ch, pm, NullspaceRoute::kPermutationOrbit);
    CHECK(via_svd.total_dimension() == via_orbit.total_dimension());
    CHECK(attractor_projector_distance(via_svd, via_orbit) < 1e-10);
  }
}

TEST_CASE("solver null spaces match a rank-revealing LU oracle") {
  for (int n : {2, 3}) {
    const auto ch = cyclic(n);
    for (Complex lambda : {Complex(1.0, 0.0), Complex(-1.0, 0.0)}) {
      check_against_lu_kernel(ch, lambda, common_eigenspace(ch, lambda));
    }
  }
}

TEST_CASE("common_eigenspace validates its eigenvalue") {
  CHECK_THROWS_AS(common_eigenspace(cyclic(2), Complex(0.5, 0.0)), std::invalid_argument);
}

TEST_CASE("orbit route requires permutation gates, capacity guards the rest") {
  TrajectoryRng rng(19);
  const RandomUnitaryChannel dense_small({{1.0, random_unitary(4, rng)}});
  CHECK_THROWS_AS(
      common_eigenspace(dense_small, Complex(1.0, 0.0), NullspaceRoute::kPermutationOrbit),
      std::invalid_argument);

  const RandomUnitaryChannel dense_large({{1.0, random_unitary(128, rng)}});
  CHECK_THROWS_AS(common_eigenspace(dense_large, Complex(1.0, 0.0)), CapacityError);
  CHECK_THROWS_AS(solve_attractors(dense_large), CapacityError);
}

TEST_CASE("projection is idempotent, channel-commuting and fixes in-span states") {
  TrajectoryRng rng(29);
  for (int n : {2, 3}) {
    const auto ch = cyclic(n);
    const AttractorBasis basis =
        solve_attractors(ch, std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
    for (int k = 0; k < 5; ++k) {
      const DensityMatrix rho = random_density_matrix(ch.dim(), rng);
      const ComplexMatrix projected = project(basis, rho);
      CHECK(hs_distance(project(basis, projected), projected) < 1e-10);
      CHECK(hs_distance(rudyn::apply(ch, projected), project(basis, rudyn::apply(ch, rho)))
            < 1e-9);
    }
    const ComplexMatrix mixed = ComplexMatrix::Identity(ch.dim(), ch.dim()) / double(ch.dim());
    CHECK(hs_distance(project(basis, mixed), mixed) < 1e-12);
  }
}

TEST_CASE("projection of a six-qubit basis state reproduces the closed form") {
  const auto ch = cyclic(6);
  const AttractorBasis basis =
      solve_attractors(ch, std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
  CHECK(basis.total_dimension() == 5);
  const DensityMatrix rho = DensityMatrix::basis_state(64, 1);
  // overlap with the invariant subspace: |<Phi|z=1>|^2 = 1/63
  CHECK(invariant_subspace_overlap(6, rho) == doctest::Approx(1.0 / 63.0).epsilon(1e-12));
  CHECK(hs_distance(project(basis, rho), analytic_asymptotic_state(6, rho).matrix()) < 1e-9);
}

TEST_CASE("asymptotic_state reduces to project for stationary bases") {
  const auto ch = cyclic(3);
  const AttractorBasis basis = solve_attractors(ch, std::vector<Complex>{Complex(1, 0)});
  TrajectoryRng rng(31);
  const DensityMatrix rho = random_density_matrix(8, rng);
  const ComplexMatrix projected = project(basis, rho);
  for (long n : {0L, 5L, 17L}) {
    CHECK(hs_distance(asymptotic_state(basis, rho, n), projected) < 1e-13);
  }
}

TEST_CASE("the N = 2 asymptotics alternates with period two") {
  const auto ch = cyclic(2);
  const AttractorBasis basis =
      solve_attractors(ch, std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
  // (|1> + i|2>)/sqrt(2) carries the off-diagonal weight the alternating
  // operator sees
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0;
  psi(2) = Complex(0.0, 1.0);
  const DensityMatrix rho = DensityMatrix::pure(psi);
  REQUIRE(std::abs(hs_inner(analytic_x6_normalized(), rho.matrix())) > 1e-3);
  const ComplexMatrix s0 = asymptotic_state(basis, rho, 0);
  const ComplexMatrix s1 = asymptotic_state(basis, rho, 1);
  const ComplexMatrix s2 = asymptotic_state(basis, rho, 2);
  CHECK(hs_distance(s0, s1) > 1e-3);
  CHECK(hs_distance(s0, s2) < 1e-13);
  // asymptotic states of Hermitian inputs stay Hermitian
  CHECK((s1 - s1.adjoint()).norm() < 1e-10);
}

TEST_CASE("a state with vanishing alternating overlap is stationary") {
  // psi = (|10> + |11>)/sqrt(2): the two off-diagonal entries cancel in
  // Tr(X6† rho) by hand
  ComplexVector psi = ComplexVector::Zero(4);
  psi(2) = 1.0;
  psi(3) = 1.0;
  const DensityMatrix rho = DensityMatrix::pure(psi);
  CHECK(std::abs(hs_inner(analytic_x6_normalized(), rho.matrix())) < 1e-15);
  const auto ch = cyclic(2);
  const AttractorBasis basis =
      solve_attractors(ch, std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
  CHECK(hs_distance(asymptotic_state(basis, rho, 0), asymptotic_state(basis, rho, 1)) < 1e-13);
}

TEST_CASE("c*-relation report passes for the CNOT networks") {
  for (int n : {2, 3}) {
    const AttractorBasis basis =
        solve_attractors(cyclic(n), std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
    const CstarReport report = verify_cstar_relations(basis);
    CHECK(report.all_pass());
    REQUIRE(report.checks.size() == 3);
    CHECK(report.checks[0].name == "unit_modulus");
    CHECK(report.checks[1].name == "adjoint_pairing");
    CHECK(report.checks[2].name == "trace_orthogonality");
  }
  // the alternating operator is antihermitian: X6† = -X6, pairing the
  // lambda = -1 block with itself
  const ComplexMatrix x6 = analytic_x6_normalized();
  CHECK(hs_distance(x6.adjoint(), ComplexMatrix(-x6)) < 1e-14);
}

TEST_CASE("attractor projector is independent of the probability vector") {
  const AttractorBasis uniform =
      solve_attractors(cyclic(3), std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
  const AttractorBasis skewed =
      solve_attractors(cyclic(3, {0.5, 0.3, 0.2}),
                       std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
  CHECK(attractor_projector_distance(uniform, skewed) < 1e-8);
}

TEST_CASE("a channel containing the identity has lambda = 1 only") {
  std::vector<Eigen::Index> id_perm(4);
  std::iota(id_perm.begin(), id_perm.end(), 0);
  const UnitaryOperator gate = cnot(2, 1, 2);
  const RandomUnitaryChannel ch(
      {{0.5, UnitaryOperator::from_permutation(id_perm)}, {0.5, gate}});

  const auto evs = peripheral_eigenvalues(ch);
  REQUIRE(evs.size() == 1);
  CHECK(std::abs(evs[0] - Complex(1.0, 0.0)) < 1e-9);

  const AttractorBasis basis = solve_attractors(ch);
  REQUIRE(basis.blocks().size() == 1);

  // independent count: dim of the commutant of an involution equals the
  // number of orbits of the induced pair permutation
  const auto& perm = gate.permutation();
  std::vector<char> seen(16, 0);
  int orbits = 0;
  for (Eigen::Index p = 0; p < 16; ++p) {
    if (seen[std::size_t(p)]) {
      continue;
    }
    ++orbits;
    Eigen::Index q = p;
    while (!seen[std::size_t(q)]) {
      seen[std::size_t(q)] = 1;
      q = perm[std::size_t(q % 4)] + 4 * perm[std::size_t(q / 4)];
    }
  }
  CHECK(basis.total_dimension() == orbits);
}

TEST_CASE("candidate sets are closed under conjugation") {
  const Complex omega = std::polar(1.0, 3.14159265358979323846 / 3.0);
  ComplexMatrix u = ComplexMatrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = omega;
  const RandomUnitaryChannel ch({{1.0, UnitaryOperator::from_matrix(u)}});
  const AttractorBasis basis =
      solve_attractors(ch, std::vector<Complex>{std::conj(omega)});
  REQUIRE(basis.blocks().size() == 2);
  CHECK(basis.find_block(omega) != nullptr);
  CHECK(basis.find_block(std::conj(omega)) != nullptr);
  CHECK(basis.total_dimension() == 2);
}

TEST_CASE("convergence towards the asymptotic dynamics is monotone") {
  TrajectoryRng rng(37);
  const auto ch = cyclic(3);
  const AttractorBasis basis =
      solve_attractors(ch, std::vector<Complex>{Complex(1, 0), Complex(-1, 0)});
  const DensityMatrix rho = random_density_matrix(8, rng);
  DensityMatrix state = rho;
  double previous = hs_distance(state.matrix(), asymptotic_state(basis, rho, 0));
  double final_distance = previous;
  for (long n = 1; n <= 200; ++n) {
    state = rudyn::apply(ch, state);
    final_distance = hs_distance(state.matrix(), asymptotic_state(basis, rho, n));
    CHECK(final_distance <= previous + 1e-10);
    previous = final_distance;
  }
  CHECK(final_distance < 1e-6);
}

TEST_CASE("Hermitian elements of the stationary block are fixed points") {
  for (int n : {2, 3}) {
    const auto ch = cyclic(n);
    const AttractorBasis basis = solve_attractors(ch, std::vector<Complex>{Complex(1, 0)});
    const AttractorBlock* block = basis.find_block(Complex(1.0, 0.0));
    REQUIRE(block != nullptr);
    for (const ComplexMatrix& x : block->basis) {
      ComplexMatrix h = x + x.adjoint();
      if (h.norm() < 1e-9) {
        h = Complex(0.0, 1.0) * (x - x.adjoint());
      }
      REQUIRE(h.norm() > 1e-9);
      h /= h.norm();
      CHECK(hs_distance(rudyn::apply(ch, h), h) < 1e-9);
    }
  }
}

}  // TEST_SUITE
