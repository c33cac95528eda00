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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rudyn/experiment.hpp"

namespace py = pybind11;
using namespace rudyn;

PYBIND11_MODULE(_rudyn, m) {
  m.doc() = "Iterated random unitary channels: attractor spaces and asymptotic dynamics";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // --- operator core -------------------------------------------------------
  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def_static("from_matrix", &DensityMatrix::from_matrix, py::arg("matrix"),
                  "Validate and wrap a Hermitian, PSD, unit-trace matrix.")
      .def_static("pure", &DensityMatrix::pure, py::arg("psi"),
                  "Normalized projector onto a state vector.")
      .def_static("basis_state", &DensityMatrix::basis_state, py::arg("dim"), py::arg("z"))
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed, py::arg("dim"))
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def("__repr__", [](const DensityMatrix& rho) {
        return "<DensityMatrix dim=" + std::to_string(rho.dim()) + ">";
      });

  py::class_<UnitaryOperator>(m, "UnitaryOperator")
      .def_static("from_matrix", &UnitaryOperator::from_matrix, py::arg("matrix"))
      .def_static("from_permutation", &UnitaryOperator::from_permutation, py::arg("perm"))
      .def_property_readonly("dim", &UnitaryOperator::dim)
      .def_property_readonly("is_permutation", &UnitaryOperator::is_permutation)
      .def("to_dense", &UnitaryOperator::to_dense)
      .def("conjugate", &UnitaryOperator::conjugate, py::arg("a"), "U A U†")
      .def("adjoint_conjugate", &UnitaryOperator::adjoint_conjugate, py::arg("a"), "U† A U");

  m.def("hs_inner", &hs_inner, py::arg("a"), py::arg("b"),
        "Hilbert-Schmidt inner product Tr(A† B).");
  m.def("hs_distance", &hs_distance, py::arg("a"), py::arg("b"));
  m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));
  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"),
        "Entropy in bits of a density matrix.");
  m.def("hermitian_eig", &hermitian_eig, py::arg("a"),
        "(ascending eigenvalues, orthonormal eigenvector columns)");
  m.def("vec", &vec, py::arg("a"), "Column-stacking vectorization.");
  m.def("unvec", py::overload_cast<const ComplexVector&, Eigen::Index>(&unvec), py::arg("v"),
        py::arg("d"));
  m.def("gram_schmidt_hs", &gram_schmidt_hs, py::arg("ops"),
        "Orthonormalize operators in the Hilbert-Schmidt inner product.");

  // --- channel ---------------------------------------------------------
  py::class_<RandomUnitaryChannel>(m, "RandomUnitaryChannel")
      .def(py::init([](const std::vector<std::pair<double, UnitaryOperator>>& terms) {
             std::vector<ChannelTerm> ts;
             ts.reserve(terms.size());
             for (const auto& [p, u] : terms) {
               ts.push_back({p, u});
             }
             return RandomUnitaryChannel(std::move(ts));
           }),
           py::arg("terms"), "Build from a list of (probability, unitary) pairs.")
      .def_property_readonly("dim", &RandomUnitaryChannel::dim)
      .def_property_readonly("term_count", &RandomUnitaryChannel::term_count)
      .def_property_readonly("all_permutations", &RandomUnitaryChannel::all_permutations)
      .def("with_probabilities", &RandomUnitaryChannel::with_probabilities, py::arg("probs"));

  m.def("apply",
        py::overload_cast<const RandomUnitaryChannel&, const DensityMatrix&>(&apply),
        py::arg("channel"), py::arg("rho"));
  m.def("apply_operator",
        py::overload_cast<const RandomUnitaryChannel&, const ComplexMatrix&>(&apply),
        py::arg("channel"), py::arg("a"), "The channel map on an arbitrary operator.");
  m.def("apply_adjoint", &apply_adjoint, py::arg("channel"), py::arg("a"));
  m.def("iterate", &iterate, py::arg("channel"), py::arg("rho"), py::arg("n"));
  m.def("superoperator", &superoperator, py::arg("channel"));
  m.def("sample_trajectory", &sample_trajectory, py::arg("channel"), py::arg("rho"),
        py::arg("n"), py::arg("seed"));

  // --- attractor -------------------------------------------------------
  py::enum_<NullspaceRoute>(m, "NullspaceRoute")
      .value("AUTO", NullspaceRoute::kAuto)
      .value("STACKED_SVD", NullspaceRoute::kStackedSvd)
      .value("PERMUTATION_ORBIT", NullspaceRoute::kPermutationOrbit);

  py::class_<AttractorBlock>(m, "AttractorBlock")
      .def_readonly("eigenvalue", &AttractorBlock::eigenvalue)
      .def_readonly("basis", &AttractorBlock::basis);

  py::class_<AttractorBasis>(m, "AttractorBasis")
      .def_property_readonly("dim", &AttractorBasis::dim)
      .def_property_readonly("blocks", &AttractorBasis::blocks)
      .def_property_readonly("total_dimension", &AttractorBasis::total_dimension)
      .def("__repr__", [](const AttractorBasis& b) {
        return "<AttractorBasis dim=" + std::to_string(b.dim()) +
               " total=" + std::to_string(b.total_dimension()) + ">";
      });

  m.def("peripheral_eigenvalues", &peripheral_eigenvalues, py::arg("channel"));
  m.def("common_eigenspace", &common_eigenspace, py::arg("channel"), py::arg("eigenvalue"),
        py::arg("route") = NullspaceRoute::kAuto);
  m.def("solve_attractors", &solve_attractors, py::arg("channel"),
        py::arg("candidates") = py::none(), py::arg("route") = NullspaceRoute::kAuto);
  m.def("project",
        py::overload_cast<const AttractorBasis&, const ComplexMatrix&>(&project),
        py::arg("basis"), py::arg("a"));
  m.def("asymptotic_state",
        py::overload_cast<const AttractorBasis&, const ComplexMatrix&, long>(&asymptotic_state),
        py::arg("basis"), py::arg("a"), py::arg("n"));
  m.def("eigenvalue_equation_residual", &eigenvalue_equation_residual, py::arg("basis"),
        py::arg("channel"));
  m.def("attractor_projector_distance", &attractor_projector_distance, py::arg("a"),
        py::arg("b"));

  py::class_<CstarCheck>(m, "CstarCheck")
      .def_readonly("name", &CstarCheck::name)
      .def_readonly("worst", &CstarCheck::worst)
      .def_readonly("tolerance", &CstarCheck::tolerance)
      .def_readonly("pass_", &CstarCheck::pass);

  py::class_<CstarReport>(m, "CstarReport")
      .def_readonly("checks", &CstarReport::checks)
      .def("all_pass", &CstarReport::all_pass)
      .def("summary", &CstarReport::summary);

  m.def("verify_cstar_relations", &verify_cstar_relations, py::arg("basis"));

  // --- qubit networks ----------------------------------------------------
  m.def("cnot", &cnot, py::arg("n_qubits"), py::arg("control"), py::arg("target"));
  m.def(
      "build_cyclic_channel",
      [](int n_qubits, const std::vector<double>& probabilities) {
        NetworkSpec spec;
        spec.n_qubits = n_qubits;
        spec.probabilities = probabilities;
        return build_cyclic_channel(spec);
      },
      py::arg("n_qubits"), py::arg("probabilities") = std::vector<double>{},
      "Cyclic CNOT network channel; empty probabilities means uniform.");
  m.def("analytic_attractors", &analytic_attractors, py::arg("n_qubits"));
  m.def("analytic_asymptotic_state", &analytic_asymptotic_state, py::arg("n_qubits"),
        py::arg("rho"));
  m.def("invariant_subspace_overlap", &invariant_subspace_overlap, py::arg("n_qubits"),
        py::arg("rho"));
  m.def("index_to_bits", &index_to_bits, py::arg("z"), py::arg("n_qubits"));
  m.def("bits_to_index", &bits_to_index, py::arg("bits"));
}
