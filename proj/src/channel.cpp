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

#include "rudyn/channel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace rudyn {

RandomUnitaryChannel::RandomUnitaryChannel(std::vector<ChannelTerm> terms)
    : dim_(0), terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("RandomUnitaryChannel: at least one term is required");
  }
  dim_ = terms_.front().unitary.dim();
  double sum = 0.0;
  for (const ChannelTerm& t : terms_) {
    if (!(t.probability > 0.0) || t.probability > 1.0) {
      throw std::invalid_argument(
          "RandomUnitaryChannel: probabilities must lie in (0, 1]; zero-probability "
          "terms are rejected, remove them instead");
    }
    if (t.unitary.dim() != dim_) {
      throw std::invalid_argument("RandomUnitaryChannel: unitaries must share one dimension");
    }
    sum += t.probability;
  }
  if (std::abs(sum - 1.0) > tol::prob_sum) {
    throw std::invalid_argument("RandomUnitaryChannel: probabilities must sum to 1, got " +
                                std::to_string(sum));
  }
}

bool RandomUnitaryChannel::all_permutations() const {
  for (const ChannelTerm& t : terms_) {
    if (!t.unitary.is_permutation()) {
      return false;
    }
  }
  return true;
}

RandomUnitaryChannel RandomUnitaryChannel::with_probabilities(
    const std::vector<double>& probs) const {
  if (probs.size() != terms_.size()) {
    throw std::invalid_argument("with_probabilities: wrong number of probabilities");
  }
  std::vector<ChannelTerm> terms;
  terms.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms.push_back({probs[i], terms_[i].unitary});
  }
  return RandomUnitaryChannel(std::move(terms));
}

ComplexMatrix apply(const RandomUnitaryChannel& ch, const ComplexMatrix& a) {
  if (a.rows() != ch.dim() || a.cols() != ch.dim()) {
    throw std::invalid_argument("apply: operator dimension does not match channel");
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim(), ch.dim());
  // Fixed summation order keeps results bit-stable run to run.
  for (const ChannelTerm& t : ch.terms()) {
    out += t.probability * t.unitary.conjugate(a);
  }
  return out;
}

DensityMatrix apply(const RandomUnitaryChannel& ch, const DensityMatrix& rho) {
  ComplexMatrix out = rudyn::apply(ch, rho.matrix());
  // Convexity of unitary conjugations preserves positivity exactly; only the
  // cheap invariants are re-checked.
  return DensityMatrix::trusted((out + out.adjoint()) / 2.0);
}

ComplexMatrix apply_adjoint(const RandomUnitaryChannel& ch, const ComplexMatrix& a) {
  if (a.rows() != ch.dim() || a.cols() != ch.dim()) {
    throw std::invalid_argument("apply_adjoint: operator dimension does not match channel");
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim(), ch.dim());
  for (const ChannelTerm& t : ch.terms()) {
    out += t.probability * t.unitary.adjoint_conjugate(a);
  }
  return out;
}

DensityMatrix iterate(const RandomUnitaryChannel& ch, const DensityMatrix& rho, long n) {
  if (n < 0) {
    throw std::invalid_argument("iterate: iteration count must be nonnegative");
  }
  DensityMatrix state = rho;
  for (long k = 0; k < n; ++k) {
    state = apply(ch, state);
  }
  return state;
}

ComplexMatrix superoperator(const RandomUnitaryChannel& ch) {
  const Eigen::Index d = ch.dim();
  const Eigen::Index d2 = d * d;
  if (d2 > limits::dense_superoperator) {
    throw CapacityError("superoperator: operator-space dimension " + std::to_string(d2) +
                        " exceeds the dense limit " +
                        std::to_string(limits::dense_superoperator) +
                        "; use candidate eigenvalues with the attractor solver instead");
  }
  ComplexMatrix m = ComplexMatrix::Zero(d2, d2);
  for (const ChannelTerm& t : ch.terms()) {
    if (t.unitary.is_permutation()) {
      const auto& u = t.unitary.permutation();
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
          m(u[std::size_t(i)] + d * u[std::size_t(j)], i + d * j) += t.probability;
        }
      }
    } else {
      const ComplexMatrix u = t.unitary.to_dense();
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
          ComplexMatrix outer = u.col(i) * u.col(j).adjoint();
          m.col(i + d * j) += t.probability * Eigen::Map<const ComplexVector>(outer.data(), d2);
        }
      }
    }
  }
  return m;
}

std::size_t TrajectoryRng::sample_term(const RandomUnitaryChannel& ch) {
  const double u = uniform01();
  double cumulative = 0.0;
  const auto& terms = ch.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    cumulative += terms[i].probability;
    if (u < cumulative) {
      return i;
    }
  }
  return terms.size() - 1;
}

std::vector<DensityMatrix> sample_trajectory(const RandomUnitaryChannel& ch,
                                             const DensityMatrix& rho, long n,
                                             std::uint64_t seed) {
  if (n < 0) {
    throw std::invalid_argument("sample_trajectory: step count must be nonnegative");
  }
  if (rho.dim() != ch.dim()) {
    throw std::invalid_argument("sample_trajectory: state dimension does not match channel");
  }
  TrajectoryRng rng(seed);
  std::vector<DensityMatrix> path;
  path.reserve(std::size_t(n) + 1);
  path.push_back(rho);
  ComplexMatrix current = rho.matrix();
  for (long k = 0; k < n; ++k) {
    const std::size_t pick = rng.sample_term(ch);
    current = ch.terms()[pick].unitary.conjugate(current);
    path.push_back(DensityMatrix::trusted((current + current.adjoint()) / 2.0));
  }
  return path;
}

}  // namespace rudyn
