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

#include <vector>

#include "rudyn/attractor.hpp"

namespace rudyn {

/// Computational-basis indexing: z = sum_i 2^(i-1) j_i with j_i the state of
/// qubit i, so qubit 1 is the least significant bit.
std::vector<int> index_to_bits(Eigen::Index z, int n_qubits);
Eigen::Index bits_to_index(const std::vector<int>& bits);

/// |0...0> on n qubits.
ComplexVector zero_ket(int n_qubits);

/// The uniform superposition of all nonzero basis states,
/// |Phi> = sum_{z>=1} |z> / sqrt(2^N - 1).
ComplexVector uniform_nonzero_ket(int n_qubits);

/// A ring of qubits coupled by controlled-NOT gates between neighbours.
struct NetworkSpec {
  enum class Topology { kCyclic };
  enum class GateFamily { kCnot };

  int n_qubits = 2;
  Topology topology = Topology::kCyclic;
  GateFamily gates = GateFamily::kCnot;
  /// One entry per edge; empty means uniform 1/N.
  std::vector<double> probabilities;
};

/// Controlled-NOT between 1-based qubits: flips the target bit when the
/// control bit is set. Returned as a permutation-backed unitary; the gate is
/// an involution.
UnitaryOperator cnot(int n_qubits, int control, int target);

/// The random unitary channel with terms (p_i, C_{i, i+1 mod N}) for
/// i = 1..N. For N = 2 both orientations C_{1,2} and C_{2,1} appear.
RandomUnitaryChannel build_cyclic_channel(const NetworkSpec& spec);

/// Closed-form attractor basis of the cyclic CNOT network: the five
/// lambda = 1 operators built from |0...0> and the uniform nonzero
/// superposition, plus (for N = 2 only) the one-dimensional lambda = -1
/// block.
AttractorBasis analytic_attractors(int n_qubits);

/// Closed-form stationary state for N > 2:
/// rho_out = P2 rho P2 + (1 - p) (1 - P2) / (2^N - 2), where P2 projects
/// onto span{|0...0>, |Phi>} and p = Tr(P2 rho). For N = 2 the asymptotic
/// dynamics is not stationary; use asymptotic_state with the solved basis.
DensityMatrix analytic_asymptotic_state(int n_qubits, const DensityMatrix& rho);

/// p = Tr(P2 rho), the weight of rho inside the gate-invariant subspace
/// span{|0...0>, |Phi>}; equals 1 exactly for states supported there.
double invariant_subspace_overlap(int n_qubits, const DensityMatrix& rho);

}  // namespace rudyn
