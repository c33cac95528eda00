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

#include "rudyn/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rudyn {

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  return (a.adjoint() * b).trace();
}

double hs_norm(const ComplexMatrix& a) {
  return a.norm();
}

double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_distance");
  return (a - b).norm();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "trace_distance");
  ComplexMatrix diff = a - b;
  ComplexMatrix herm = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

static double hermiticity_deviation(const ComplexMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

std::pair<RealVector, ComplexMatrix> hermitian_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  }
  if (hermiticity_deviation(a) > tol::hermitian) {
    throw std::invalid_argument("hermitian_eig: input is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexVector vec(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("vec: matrix must be square");
  }
  // Eigen stores column-major, so the raw buffer already is the
  // column-stacked layout vec(A)[i + d*j] = A(i, j).
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
  if (v.size() != d * d) {
    throw std::invalid_argument("unvec: vector length does not equal d*d");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

ComplexMatrix unvec(const ComplexVector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (d * d != v.size()) {
    throw std::invalid_argument("unvec: vector length is not a perfect square");
  }
  return unvec(v, d);
}

ComplexMatrix conjugation_superoperator(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw std::invalid_argument("conjugation_superoperator: matrix must be square");
  }
  const Eigen::Index d = u.rows();
  ComplexMatrix s(d * d, d * d);
  // Column i + d*j of S is vec(U E_ij U†) = vec(u_i u_j†).
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      ComplexMatrix outer = u.col(i) * u.col(j).adjoint();
      s.col(i + d * j) = Eigen::Map<const ComplexVector>(outer.data(), d * d);
    }
  }
  return s;
}

std::vector<ComplexMatrix> gram_schmidt_hs(const std::vector<ComplexMatrix>& ops) {
  std::vector<ComplexMatrix> basis;
  if (ops.empty()) {
    return basis;
  }
  for (std::size_t k = 1; k < ops.size(); ++k) {
    require_same_shape(ops[0], ops[k], "gram_schmidt_hs");
  }
  for (const ComplexMatrix& op : ops) {
    ComplexMatrix w = op;
    // Two projection passes keep near-degenerate inputs orthogonal to
    // working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexMatrix& e : basis) {
        w -= hs_inner(e, w) * e;
      }
    }
    const double n = hs_norm(w);
    if (n >= tol::gram_schmidt_drop) {
      basis.push_back(w / n);
    }
  }
  return basis;
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

static void check_hermitian_unit_trace(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
  if (!is_finite(m)) {
    throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
  }
  if (hermiticity_deviation(m) > tol::hermitian) {
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian within tolerance");
  }
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol::trace) {
    throw std::invalid_argument(std::string(who) + ": trace differs from 1 beyond tolerance");
  }
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  check_hermitian_unit_trace(m, "DensityMatrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::positivity) {
    throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue beyond tolerance");
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 1e-12)) {
    throw std::invalid_argument("DensityMatrix::pure: state vector is numerically null");
  }
  ComplexVector unit = psi / n;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index d, Eigen::Index z) {
  if (d <= 0 || z < 0 || z >= d) {
    throw std::invalid_argument("DensityMatrix::basis_state: index out of range");
  }
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(z, z) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index d) {
  if (d <= 0) {
    throw std::invalid_argument("DensityMatrix::maximally_mixed: dimension must be positive");
  }
  return DensityMatrix(ComplexMatrix::Identity(d, d) / double(d));
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) {
  check_hermitian_unit_trace(m, "DensityMatrix::trusted");
  return DensityMatrix(std::move(m));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double e = es.eigenvalues()(k);
    if (e > tol::entropy_eig_cutoff) {
      s -= e * std::log2(e);
    }
  }
  return std::max(s, 0.0);
}

// ---------------------------------------------------------------------------
// UnitaryOperator
// ---------------------------------------------------------------------------

UnitaryOperator UnitaryOperator::from_matrix(ComplexMatrix u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    throw std::invalid_argument("UnitaryOperator: matrix must be square and nonempty");
  }
  if (!is_finite(u)) {
    throw std::invalid_argument("UnitaryOperator: matrix has non-finite entries");
  }
  const Eigen::Index d = u.rows();
  const double dev = (u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm();
  if (dev > tol::unitary_per_dim * double(d)) {
    throw std::invalid_argument("UnitaryOperator: matrix is not unitary within tolerance");
  }
  return UnitaryOperator(d, std::move(u), std::nullopt);
}

UnitaryOperator UnitaryOperator::from_permutation(std::vector<Eigen::Index> perm) {
  const auto d = static_cast<Eigen::Index>(perm.size());
  if (d == 0) {
    throw std::invalid_argument("UnitaryOperator: empty permutation");
  }
  std::vector<bool> seen(perm.size(), false);
  for (Eigen::Index image : perm) {
    if (image < 0 || image >= d || seen[static_cast<std::size_t>(image)]) {
      throw std::invalid_argument("UnitaryOperator: index map is not a permutation");
    }
    seen[static_cast<std::size_t>(image)] = true;
  }
  return UnitaryOperator(d, std::nullopt, std::move(perm));
}

ComplexMatrix UnitaryOperator::to_dense() const {
  if (dense_) {
    return *dense_;
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
  for (Eigen::Index z = 0; z < dim_; ++z) {
    m((*perm_)[static_cast<std::size_t>(z)], z) = 1.0;
  }
  return m;
}

ComplexMatrix UnitaryOperator::conjugate(const ComplexMatrix& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) {
    throw std::invalid_argument("UnitaryOperator::conjugate: dimension mismatch");
  }
  if (perm_) {
    const auto& u = *perm_;
    ComplexMatrix out(dim_, dim_);
    for (Eigen::Index j = 0; j < dim_; ++j) {
      const Eigen::Index uj = u[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < dim_; ++i) {
        out(u[static_cast<std::size_t>(i)], uj) = a(i, j);
      }
    }
    return out;
  }
  return *dense_ * a * dense_->adjoint();
}

ComplexMatrix UnitaryOperator::adjoint_conjugate(const ComplexMatrix& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) {
    throw std::invalid_argument("UnitaryOperator::adjoint_conjugate: dimension mismatch");
  }
  if (perm_) {
    const auto& u = *perm_;
    ComplexMatrix out(dim_, dim_);
    for (Eigen::Index j = 0; j < dim_; ++j) {
      const Eigen::Index uj = u[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < dim_; ++i) {
        out(i, j) = a(u[static_cast<std::size_t>(i)], uj);
      }
    }
    return out;
  }
  return dense_->adjoint() * a * *dense_;
}

}  // namespace rudyn
