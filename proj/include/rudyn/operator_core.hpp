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
#include <utility>
#include <vector>

#include "rudyn/types.hpp"

namespace rudyn {

// ---------------------------------------------------------------------------
// Hilbert-Schmidt geometry on B(H)
// ---------------------------------------------------------------------------

/// Hilbert-Schmidt inner product (A, B) = Tr(A† B). Conjugate-symmetric in
/// its arguments. Throws std::invalid_argument on shape mismatch.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Frobenius norm sqrt((A, A)).
double hs_norm(const ComplexMatrix& a);

/// Hilbert-Schmidt distance sqrt((A-B, A-B)).
double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace norm ||A||_1 / 2 style distance between Hermitian operators,
/// provided for comparison plots only; the library's convergence measure is
/// hs_distance.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix. Validates Hermiticity within
/// tol::hermitian (max entry deviation) and throws std::invalid_argument
/// otherwise. Eigenvalues ascending, eigenvector columns orthonormal.
std::pair<RealVector, ComplexMatrix> hermitian_eig(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// Vectorization (column stacking, fixed project-wide)
// ---------------------------------------------------------------------------

/// vec(A)[i + d*j] = A(i, j) for a square d x d matrix A.
ComplexVector vec(const ComplexMatrix& a);

/// Inverse of vec for a given dimension d; v must have length d*d.
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d);

/// Inverse of vec, inferring d = sqrt(len). Throws if len is not a perfect
/// square.
ComplexMatrix unvec(const ComplexVector& v);

/// The d^2 x d^2 matrix S with S vec(X) = vec(U X U†) for every X. Under the
/// column-stacking convention its entries are S[a + d*b, i + d*j] =
/// U(a,i) conj(U(b,j)).
ComplexMatrix conjugation_superoperator(const ComplexMatrix& u);

// ---------------------------------------------------------------------------
// Orthonormalization
// ---------------------------------------------------------------------------

/// Modified (two-pass) Gram-Schmidt in the Hilbert-Schmidt inner product.
/// Inputs whose residual norm after projection falls below
/// tol::gram_schmidt_drop are dropped. Empty input yields empty output.
std::vector<ComplexMatrix> gram_schmidt_hs(const std::vector<ComplexMatrix>& ops);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Hermitian, positive semidefinite, unit-trace operator.
///
/// from_matrix performs the full invariant check (Hermiticity, trace and an
/// eigenvalue positivity test); construction paths that preserve the
/// invariants by algebra (pure states, channel outputs) use the cheaper
/// trusted() entry point.
class DensityMatrix {
 public:
  /// Validates all invariants: Hermitian within tol::hermitian, unit trace
  /// within tol::trace, min eigenvalue >= -tol::positivity.
  static DensityMatrix from_matrix(ComplexMatrix m);

  /// rho = psi psi† / <psi|psi>. Throws if psi is numerically null.
  static DensityMatrix pure(const ComplexVector& psi);

  /// Basis-state projector |z><z| on a d-dimensional space.
  static DensityMatrix basis_state(Eigen::Index d, Eigen::Index z);

  /// The unital fixed point 1/d.
  static DensityMatrix maximally_mixed(Eigen::Index d);

  /// Wraps a matrix that is a valid density matrix by construction.
  /// Checks Hermiticity and trace (cheap) but skips the eigenvalue test.
  static DensityMatrix trusted(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// von Neumann entropy -sum_e e log2(e) in bits. Eigenvalues below
/// tol::entropy_eig_cutoff are treated as exact zeros.
double von_neumann_entropy(const DensityMatrix& rho);

/// A unitary operator, optionally backed by a basis-state permutation.
///
/// Permutation-backed operators (U|z> = |perm[z]>) keep the index map and
/// never materialize the dense matrix on the conjugation fast path, which is
/// what makes iteration of large CNOT networks affordable.
class UnitaryOperator {
 public:
  /// Validates ||U†U - 1||_F <= dim * tol::unitary_per_dim.
  static UnitaryOperator from_matrix(ComplexMatrix u);

  /// perm must be a bijection of {0, ..., d-1}.
  static UnitaryOperator from_permutation(std::vector<Eigen::Index> perm);

  Eigen::Index dim() const { return dim_; }
  bool is_permutation() const { return perm_.has_value(); }
  const std::vector<Eigen::Index>& permutation() const { return *perm_; }

  /// Dense matrix form (built on demand for permutation-backed operators).
  ComplexMatrix to_dense() const;

  /// U A U†.
  ComplexMatrix conjugate(const ComplexMatrix& a) const;

  /// U† A U.
  ComplexMatrix adjoint_conjugate(const ComplexMatrix& a) const;

 private:
  UnitaryOperator(Eigen::Index dim, std::optional<ComplexMatrix> dense,
                  std::optional<std::vector<Eigen::Index>> perm)
      : dim_(dim), dense_(std::move(dense)), perm_(std::move(perm)) {}

  Eigen::Index dim_;
  std::optional<ComplexMatrix> dense_;
  std::optional<std::vector<Eigen::Index>> perm_;
};

}  // namespace rudyn
