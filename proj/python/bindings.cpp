// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include <optional>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbrinterp/boundary.hpp"
#include "dbrinterp/homint.hpp"
#include "dbrinterp/oap.hpp"
#include "dbrinterp/problem.hpp"
#include "dbrinterp/solve.hpp"

namespace py = pybind11;
using namespace dbrinterp;

namespace {

py::tuple command_tuple(const CommandResult& r) { return py::make_tuple(r.exit_code, dump_json(r.report)); }

RunConfig config_from(const std::optional<std::string>& text) {
  return text ? parse_config(*text) : RunConfig{};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Norm-constrained interpolation in de Branges-Rovnyak and Hardy spaces";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<PoleError>(m, "PoleError", error.ptr());
  py::register_exception<IllPosedError>(m, "IllPosedError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  auto unsolvable = py::register_exception<UnsolvableError>(m, "UnsolvableError", error.ptr());
  py::register_exception<BudgetExceededError>(m, "BudgetExceededError", unsolvable.ptr());
  py::register_exception<InconsistencyError>(m, "InconsistencyError", error.ptr());
  py::register_exception<RecoveryError>(m, "RecoveryError", error.ptr());

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("rank_tol", &Tolerances::rank_tol)
      .def_readwrite("psd_tol", &Tolerances::psd_tol)
      .def_readwrite("residual_tol", &Tolerances::residual_tol);

  py::class_<Realization>(m, "Realization")
      .def(py::init<CMatrix, CMatrix, CMatrix, CMatrix>(), py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"))
      .def_static("constant", &Realization::constant, py::arg("D"))
      .def_property_readonly("A", &Realization::A)
      .def_property_readonly("B", &Realization::B)
      .def_property_readonly("C", &Realization::C)
      .def_property_readonly("D", &Realization::D)
      .def_property_readonly("state_dim", &Realization::state_dim)
      .def("__call__", &Realization::eval, py::arg("z"))
      .def("taylor_coeffs", &Realization::taylor_coeffs, py::arg("m"))
      .def("h2_norm", [](const Realization& f) { return h2_norm(f); });

  py::class_<SchurFunction>(m, "SchurFunction")
      .def_readonly("realization", &SchurFunction::realization)
      .def_readonly("certified_contractive", &SchurFunction::certified_contractive)
      .def_readonly("certified_inner", &SchurFunction::certified_inner)
      .def("__call__", &SchurFunction::eval, py::arg("z"));

  m.def("blaschke", &blaschke, py::arg("zeros"), py::arg("phase") = cplx(1.0), py::arg("tol") = Tolerances{});
  m.def("certify_schur", [](const Realization& R) { return certify_schur(R); }, py::arg("realization"));
  m.def("solve_stein", &solve_stein, py::arg("T"), py::arg("Q"), py::arg("tol") = Tolerances{});
  m.def("h2_inner_product", &h2_inner_product, py::arg("f"), py::arg("g"), py::arg("tol") = Tolerances{});

  py::class_<InterpData>(m, "InterpData")
      .def_readonly("E", &InterpData::E)
      .def_readonly("T", &InterpData::T)
      .def_readonly("x", &InterpData::x);
  m.def("np_data", &np_data, py::arg("nodes"), py::arg("targets"));
  m.def("cf_data", &cf_data, py::arg("point"), py::arg("coefficients"));

  py::class_<H2Solution>(m, "H2Solution")
      .def_readonly("P", &H2Solution::P)
      .def_readonly("f_min", &H2Solution::f_min)
      .def_readonly("B", &H2Solution::B)
      .def_readonly("budget", &H2Solution::budget)
      .def_readonly("margin", &H2Solution::margin);
  m.def("h2_solve", &h2_solve, py::arg("E"), py::arg("T"), py::arg("x"), py::arg("tol") = Tolerances{});

  py::class_<ModelSpace>(m, "ModelSpace")
      .def_readonly("basis", &ModelSpace::basis)
      .def_readonly("T", &ModelSpace::T)
      .def_readonly("E", &ModelSpace::E);
  m.def("model_space", &model_space, py::arg("B"), py::arg("tol") = Tolerances{});

  m.def("check", [](const std::string& spec, const std::optional<std::string>& config) {
        return command_tuple(check_problem(parse_json_text(spec, "spec"), config_from(config)));
      }, py::arg("spec"), py::arg("config") = py::none(),
      "Admissibility report of a JSON spec as (exit_code, report_json).");
  m.def("solve", [](const std::string& spec, const std::optional<std::string>& param,
                    const std::optional<std::string>& config) {
        std::optional<Json> p;
        if (param) p = parse_json_text(*param, "param");
        return command_tuple(solve_problem(parse_json_text(spec, "spec"), p, config_from(config)));
      }, py::arg("spec"), py::arg("param") = py::none(), py::arg("config") = py::none(),
      "Solves a JSON spec; returns (exit_code, result_json).");
  m.def("eval_csv", [](const std::string& result, int n_r, int n_theta, double r_max) {
        return eval_result_csv(parse_json_text(result, "result"), n_r, n_theta, r_max);
      }, py::arg("result"), py::arg("n_r") = 8, py::arg("n_theta") = 16, py::arg("r_max") = 0.95);
}
