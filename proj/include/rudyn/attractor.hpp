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

#include <optional>
#include <string>
#include <vector>

#include "rudyn/channel.hpp"

namespace rudyn {

/// One peripheral eigenvalue together with an orthonormal (Hilbert-Schmidt)
/// basis of its common eigenspace.
struct AttractorBlock {
  Complex eigenvalue;
  std::vector<ComplexMatrix> basis;
};

/// The attractor space of a random unitary channel: for every unit-modulus
/// eigenvalue lambda, the operators X with U_i X U_i† = lambda X for all i.
///
/// Construction validates the structural invariants: unit modulus per block,
/// global orthonormality of the combined basis, and closure of the block
/// spans under the adjoint map X -> X† (which pairs lambda with conj(lambda)).
class AttractorBasis {
 public:
  AttractorBasis(Eigen::Index dim, std::vector<AttractorBlock> blocks);

  Eigen::Index dim() const { return dim_; }
  const std::vector<AttractorBlock>& blocks() const { return blocks_; }

  /// Sum of block dimensions.
  Eigen::Index total_dimension() const;

  /// Block lookup by eigenvalue (within the clustering tolerance); null when
  /// absent.
  const AttractorBlock* find_block(Complex lambda) const;

 private:
  Eigen::Index dim_;
  std::vector<AttractorBlock> blocks_;
};

/// How the common-eigenspace null space is computed.
enum class NullspaceRoute {
  kAuto,              ///< SVD up to limits::stacked_svd, orbit route for larger permutation channels
  kStackedSvd,        ///< SVD of the stacked constraint matrix (general unitaries)
  kPermutationOrbit,  ///< exact orbit traversal (permutation-backed unitaries only)
};

/// Distinct eigenvalues of the channel superoperator with |lambda| > 1 - 1e-9,
/// deduplicated by clustering within 1e-8 and sorted by phase in [0, 2pi).
/// Always contains lambda = 1. Requires the dense superoperator to be within
/// capacity.
std::vector<Complex> peripheral_eigenvalues(const RandomUnitaryChannel& ch);

/// Orthonormal basis of {X : U_i X U_i† = lambda X for all i}, empty when no
/// solution exists. lambda must lie on the unit circle within 1e-9.
///
/// The stacked-SVD route forms the (|I| d^2) x d^2 matrix with blocks
/// (S_i - lambda 1) and keeps right singular vectors whose singular values
/// fall below tol::nullspace_rel times the largest one. The orbit route
/// traverses the permutation action on index pairs with an exact phase
/// cocycle and is used automatically above the SVD size limit.
std::vector<ComplexMatrix> common_eigenspace(const RandomUnitaryChannel& ch, Complex lambda,
                                             NullspaceRoute route = NullspaceRoute::kAuto);

/// Solves the attractor structure for the given candidate eigenvalues, or for
/// the full peripheral spectrum when candidates are omitted. The candidate set
/// is closed under complex conjugation before solving. Every returned block is
/// re-verified against the eigenvalue equations (residual < 1e-9).
AttractorBasis solve_attractors(const RandomUnitaryChannel& ch,
                                std::optional<std::vector<Complex>> candidates = std::nullopt,
                                NullspaceRoute route = NullspaceRoute::kAuto);

/// Projection onto the attractor space: sum over blocks of Tr(X† A) X.
/// Idempotent, and commutes with the channel map.
ComplexMatrix project(const AttractorBasis& basis, const ComplexMatrix& a);
ComplexMatrix project(const AttractorBasis& basis, const DensityMatrix& rho);

/// Closed-form asymptotic dynamics: sum over blocks of lambda^n Tr(X† A) X.
/// Equals project for n = 0 and for bases whose only eigenvalue is 1.
ComplexMatrix asymptotic_state(const AttractorBasis& basis, const ComplexMatrix& a, long n);
ComplexMatrix asymptotic_state(const AttractorBasis& basis, const DensityMatrix& rho, long n);

/// Largest defining-equation residual max ||U_i X U_i† - lambda X|| over all
/// blocks, basis elements and channel terms.
double eigenvalue_equation_residual(const AttractorBasis& basis, const RandomUnitaryChannel& ch);

/// Frobenius distance between the operator-space projectors spanned by two
/// bases, computed from the cross Gram matrix without materializing the
/// d^2 x d^2 projectors.
double attractor_projector_distance(const AttractorBasis& a, const AttractorBasis& b);

struct CstarCheck {
  std::string name;
  double worst;
  double tolerance;
  bool pass;
};

struct CstarReport {
  std::vector<CstarCheck> checks;
  bool all_pass() const;
  std::string summary() const;
};

/// Numerical check of the algebraic relations satisfied by the attractor
/// basis: unit-modulus eigenvalues, adjoint pairing between the lambda and
/// conj(lambda) blocks, and vanishing traces Tr(X^n Y^m) whenever
/// lambda^n mu^m differs from 1 (powers up to 3).
CstarReport verify_cstar_relations(const AttractorBasis& basis);

}  // namespace rudyn
