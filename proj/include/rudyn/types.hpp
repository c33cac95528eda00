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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace rudyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances used across the library. All values are stated
/// against IEEE double precision.
namespace tol {
inline constexpr double hermitian = 1e-12;        ///< max entry deviation from A = A†
inline constexpr double trace = 1e-12;            ///< |Tr(rho) - 1|
inline constexpr double positivity = 1e-10;       ///< min eigenvalue >= -positivity
inline constexpr double unitary_per_dim = 1e-12;  ///< ||U†U - 1||_F <= d * this
inline constexpr double prob_sum = 1e-12;         ///< |sum p_i - 1|
inline constexpr double eig_residual_per_dim = 1e-10;
inline constexpr double entropy_eig_cutoff = 1e-14;
inline constexpr double gram_schmidt_drop = 1e-10;
inline constexpr double gram_schmidt_ortho = 1e-10;
inline constexpr double nullspace_rel = 1e-10;      ///< sigma < this * sigma_max
inline constexpr double peripheral_band = 1e-9;     ///< keep |lambda| > 1 - this
inline constexpr double eigenvalue_cluster = 1e-8;  ///< dedup radius on the unit circle
inline constexpr double attractor_residual = 1e-9;  ///< ||U X U† - lambda X||
inline constexpr double cstar = 1e-8;
}  // namespace tol

namespace limits {
/// Largest operator-space dimension d*d for which the dense superoperator
/// (and its full spectrum) may be formed.
inline constexpr Eigen::Index dense_superoperator = 4096;
/// Largest d*d for which the stacked-constraint SVD is the default
/// null-space route; larger permutation channels use the orbit route.
inline constexpr Eigen::Index stacked_svd = 1024;
}  // namespace limits

/// Thrown when a request exceeds a configured dense-capacity limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                               const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

}  // namespace rudyn
