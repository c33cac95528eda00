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

#include <cstdint>
#include <random>
#include <vector>

#include "rudyn/operator_core.hpp"

namespace rudyn {

struct ChannelTerm {
  double probability;
  UnitaryOperator unitary;
};

/// A random unitary operation rho -> sum_i p_i U_i rho U_i†.
///
/// Probabilities must be strictly positive and sum to one; a zero-probability
/// term is rejected rather than dropped, since it would silently enlarge the
/// constraint set seen by the attractor solver.
class RandomUnitaryChannel {
 public:
  explicit RandomUnitaryChannel(std::vector<ChannelTerm> terms);

  Eigen::Index dim() const { return dim_; }
  const std::vector<ChannelTerm>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// True when every unitary carries a permutation representation.
  bool all_permutations() const;

  /// Same unitaries, different probability vector.
  RandomUnitaryChannel with_probabilities(const std::vector<double>& probs) const;

 private:
  Eigen::Index dim_;
  std::vector<ChannelTerm> terms_;
};

/// One application of the channel map. Trace and Hermiticity are preserved
/// to working precision; the result is wrapped without re-running the
/// eigenvalue positivity check.
DensityMatrix apply(const RandomUnitaryChannel& ch, const DensityMatrix& rho);

/// The channel map extended to arbitrary operators A -> sum_i p_i U_i A U_i†.
ComplexMatrix apply(const RandomUnitaryChannel& ch, const ComplexMatrix& a);

/// Adjoint map with respect to the Hilbert-Schmidt inner product:
/// A -> sum_i p_i U_i† A U_i.
ComplexMatrix apply_adjoint(const RandomUnitaryChannel& ch, const ComplexMatrix& a);

/// n-fold composition of apply; n = 0 returns the input unchanged.
DensityMatrix iterate(const RandomUnitaryChannel& ch, const DensityMatrix& rho, long n);

/// Dense d^2 x d^2 matrix M with M vec(rho) = vec(apply(ch, rho)).
/// Throws CapacityError when d^2 exceeds limits::dense_superoperator.
ComplexMatrix superoperator(const RandomUnitaryChannel& ch);

/// Deterministic, portable pseudo-random source for trajectory sampling:
/// std::mt19937_64 (whose output sequence is pinned by the C++ standard)
/// mapped to uniform doubles via the top 53 bits. Identical seeds give
/// identical trajectories on every conforming platform.
class TrajectoryRng {
 public:
  explicit TrajectoryRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return double(engine_() >> 11) * 0x1.0p-53;
  }

  /// Inverse-CDF draw from the channel's term probabilities.
  std::size_t sample_term(const RandomUnitaryChannel& ch);

 private:
  std::mt19937_64 engine_;
};

/// One stochastic realization of n gate draws. Returns n + 1 states starting
/// with rho itself.
std::vector<DensityMatrix> sample_trajectory(const RandomUnitaryChannel& ch,
                                             const DensityMatrix& rho, long n,
                                             std::uint64_t seed);

}  // namespace rudyn
