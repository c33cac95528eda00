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

#include "rudyn/qubit_network.hpp"

#include <cmath>
#include <string>

namespace rudyn {

namespace {
constexpr int kMaxQubits = 24;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must lie in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(n_qubits));
  }
}
}  // namespace

std::vector<int> index_to_bits(Eigen::Index z, int n_qubits) {
  check_qubit_count(n_qubits);
  if (z < 0 || z >= (Eigen::Index(1) << n_qubits)) {
    throw std::invalid_argument("index_to_bits: basis index out of range");
  }
  std::vector<int> bits(static_cast<std::size_t>(n_qubits));
  for (int i = 0; i < n_qubits; ++i) {
    bits[std::size_t(i)] = int((z >> i) & 1);
  }
  return bits;
}

Eigen::Index bits_to_index(const std::vector<int>& bits) {
  if (bits.empty() || bits.size() > std::size_t(kMaxQubits)) {
    throw std::invalid_argument("bits_to_index: unsupported qubit count");
  }
  Eigen::Index z = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) {
      throw std::invalid_argument("bits_to_index: bits must be 0 or 1");
    }
    z |= Eigen::Index(bits[i]) << i;
  }
  return z;
}

ComplexVector zero_ket(int n_qubits) {
  check_qubit_count(n_qubits);
  ComplexVector ket = ComplexVector::Zero(Eigen::Index(1) << n_qubits);
  ket(0) = 1.0;
  return ket;
}

ComplexVector uniform_nonzero_ket(int n_qubits) {
  check_qubit_count(n_qubits);
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  ComplexVector ket = ComplexVector::Constant(d, 1.0 / std::sqrt(double(d - 1)));
  ket(0) = 0.0;
  return ket;
}

UnitaryOperator cnot(int n_qubits, int control, int target) {
  check_qubit_count(n_qubits);
  if (control < 1 || control > n_qubits || target < 1 || target > n_qubits) {
    throw std::invalid_argument("cnot: qubit index out of range");
  }
  if (control == target) {
    throw std::invalid_argument("cnot: control and target must differ");
  }
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
  for (Eigen::Index z = 0; z < d; ++z) {
    const Eigen::Index control_bit = (z >> (control - 1)) & 1;
    perm[std::size_t(z)] = z ^ (control_bit << (target - 1));
  }
  return UnitaryOperator::from_permutation(std::move(perm));
}

RandomUnitaryChannel build_cyclic_channel(const NetworkSpec& spec) {
  if (spec.n_qubits < 2) {
    throw std::invalid_argument("build_cyclic_channel: at least two qubits are required");
  }
  check_qubit_count(spec.n_qubits);
  const auto n = std::size_t(spec.n_qubits);
  std::vector<double> probs = spec.probabilities;
  if (probs.empty()) {
    probs.assign(n, 1.0 / double(n));
  }
  if (probs.size() != n) {
    throw std::invalid_argument(
        "build_cyclic_channel: one probability per edge is required (" + std::to_string(n) +
        " edges)");
  }
  std::vector<ChannelTerm> terms;
  terms.reserve(n);
  for (int i = 1; i <= spec.n_qubits; ++i) {
    const int next = (i % spec.n_qubits) + 1;
    terms.push_back({probs[std::size_t(i - 1)], cnot(spec.n_qubits, i, next)});
  }
  return RandomUnitaryChannel(std::move(terms));
}

AttractorBasis analytic_attractors(int n_qubits) {
  if (n_qubits < 2) {
    throw std::invalid_argument("analytic_attractors: at least two qubits are required");
  }
  check_qubit_count(n_qubits);
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  const ComplexVector zero = zero_ket(n_qubits);
  const ComplexVector phi = uniform_nonzero_ket(n_qubits);

  std::vector<ComplexMatrix> fixed;
  fixed.push_back(zero * zero.adjoint());
  fixed.push_back(zero * phi.adjoint());
  fixed.push_back(phi * zero.adjoint());
  fixed.push_back(phi * phi.adjoint());
  fixed.push_back((ComplexMatrix::Identity(d, d) - zero * zero.adjoint() - phi * phi.adjoint()) /
                  std::sqrt(double(d - 2)));

  std::vector<AttractorBlock> blocks;
  blocks.push_back({Complex(1.0, 0.0), std::move(fixed)});

  if (n_qubits == 2) {
    // The only alternating attractor: an antihermitian operator supported on
    // the nonzero off-diagonal pairs, odd under every network CNOT.
    ComplexMatrix x = ComplexMatrix::Zero(4, 4);
    x(1, 2) = -1.0;
    x(1, 3) = 1.0;
    x(2, 1) = 1.0;
    x(2, 3) = -1.0;
    x(3, 1) = -1.0;
    x(3, 2) = 1.0;
    x /= std::sqrt(6.0);
    blocks.push_back({Complex(-1.0, 0.0), {std::move(x)}});
  }
  return AttractorBasis(d, std::move(blocks));
}

namespace {
ComplexMatrix invariant_subspace_projector(int n_qubits) {
  const ComplexVector zero = zero_ket(n_qubits);
  const ComplexVector phi = uniform_nonzero_ket(n_qubits);
  return zero * zero.adjoint() + phi * phi.adjoint();
}
}  // namespace

DensityMatrix analytic_asymptotic_state(int n_qubits, const DensityMatrix& rho) {
  if (n_qubits <= 2) {
    throw std::invalid_argument(
        "analytic_asymptotic_state: defined for more than two qubits; for N = 2 use "
        "asymptotic_state with the solved attractor basis (the dynamics need not be "
        "stationary)");
  }
  check_qubit_count(n_qubits);
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  if (rho.dim() != d) {
    throw std::invalid_argument("analytic_asymptotic_state: state dimension mismatch");
  }
  const ComplexMatrix p2 = invariant_subspace_projector(n_qubits);
  const double p = (p2 * rho.matrix()).trace().real();
  ComplexMatrix out = p2 * rho.matrix() * p2 +
                      ((1.0 - p) / double(d - 2)) * (ComplexMatrix::Identity(d, d) - p2);
  return DensityMatrix::trusted((out + out.adjoint()) / 2.0);
}

double invariant_subspace_overlap(int n_qubits, const DensityMatrix& rho) {
  check_qubit_count(n_qubits);
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  if (rho.dim() != d) {
    throw std::invalid_argument("invariant_subspace_overlap: state dimension mismatch");
  }
  const ComplexVector zero = zero_ket(n_qubits);
  const ComplexVector phi = uniform_nonzero_ket(n_qubits);
  const double overlap = ((zero.adjoint() * rho.matrix() * zero).value() +
                          (phi.adjoint() * rho.matrix() * phi).value())
                             .real();
  return overlap;
}

}  // namespace rudyn
