# Copyright 2026 The rudyn authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Iterated random unitary channels: attractor spaces and asymptotic dynamics."""

from ._rudyn import (
    AttractorBasis,
    AttractorBlock,
    CapacityError,
    ConfigError,
    CstarCheck,
    CstarReport,
    DensityMatrix,
    NullspaceRoute,
    RandomUnitaryChannel,
    UnitaryOperator,
    analytic_asymptotic_state,
    analytic_attractors,
    apply,
    apply_adjoint,
    apply_operator,
    asymptotic_state,
    attractor_projector_distance,
    bits_to_index,
    build_cyclic_channel,
    cnot,
    common_eigenspace,
    eigenvalue_equation_residual,
    gram_schmidt_hs,
    hermitian_eig,
    hs_distance,
    hs_inner,
    index_to_bits,
    invariant_subspace_overlap,
    iterate,
    peripheral_eigenvalues,
    project,
    sample_trajectory,
    solve_attractors,
    superoperator,
    trace_distance,
    unvec,
    vec,
    verify_cstar_relations,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "AttractorBasis",
    "AttractorBlock",
    "CapacityError",
    "ConfigError",
    "CstarCheck",
    "CstarReport",
    "DensityMatrix",
    "NullspaceRoute",
    "RandomUnitaryChannel",
    "UnitaryOperator",
    "analytic_asymptotic_state",
    "analytic_attractors",
    "apply",
    "apply_adjoint",
    "apply_operator",
    "asymptotic_state",
    "attractor_projector_distance",
    "bits_to_index",
    "build_cyclic_channel",
    "cnot",
    "common_eigenspace",
    "eigenvalue_equation_residual",
    "gram_schmidt_hs",
    "hermitian_eig",
    "hs_distance",
    "hs_inner",
    "index_to_bits",
    "invariant_subspace_overlap",
    "iterate",
    "peripheral_eigenvalues",
    "project",
    "sample_trajectory",
    "solve_attractors",
    "superoperator",
    "trace_distance",
    "unvec",
    "vec",
    "verify_cstar_relations",
    "von_neumann_entropy",
]
