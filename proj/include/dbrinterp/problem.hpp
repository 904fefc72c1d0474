// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file problem.hpp
///
/// Problem specifications and result files. Specs and results are JSON with a
/// "schema": 1 field; complex numbers are [re, im] pairs (a bare number is
/// real) and matrices are row-major nested arrays.
///
/// Spec kinds:
///   aip           S, T, E, N, x
///   np            nodes, targets (optional S)
///   cf            point, coefficients (optional S)
///   h2            E, T, x (optional S)
///   boundary      s, angles, orders, targets
///   intersection  S, B
///
/// A function entry is one of
///   {"realization": {"A": .., "B": .., "C": .., "D": ..}}
///   {"blaschke": {"zeros": [..], "phase": [re, im]}}
///   {"constant": matrix}
///

#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "dbrinterp/rational.hpp"

namespace dbrinterp {

using Json = nlohmann::ordered_json;

/// Malformed spec, result or config input; the message carries the location.
class InputError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInput = 2;

/// Library tolerances plus the threshold applied to verification residuals.
struct RunConfig {
  Tolerances tol;
  double verify_tol = 1e-6;
};

/// Parses `key = value` lines (optionally under a [tolerances] table) with
/// keys rank_tol, psd_tol, residual_tol and verify_tol. '#' starts a comment.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});

/// Parses JSON text, reporting line and column on failure.
Json parse_json_text(const std::string& text, const std::string& source);

/// JSON rendering with floats at 17 significant digits, two-space indent and
/// a trailing newline. Object keys keep insertion order.
std::string dump_json(const Json& j);

CMatrix matrix_from_json(const Json& j, const std::string& where, Index rows_hint = 0, Index cols_hint = 0);
CVector vector_from_json(const Json& j, const std::string& where);
cplx complex_from_json(const Json& j, const std::string& where);
Json to_json(cplx c);
Json to_json(const CMatrix& M);
Json to_json(const CVector& v);

Json realization_to_json(const Realization& R);
Realization realization_from_json(const Json& j, const std::string& where);
/// Builds a function from a function entry and certifies it on the default grids.
SchurFunction function_from_json(const Json& j, const std::string& where, const Tolerances& tol);

struct CommandResult {
  int exit_code = kExitOk;
  Json report;  ///< structured output (check report or result file)
};

/// Admissibility and solvability report for a spec.
CommandResult check_problem(const Json& spec, const RunConfig& cfg);

/// Solves a spec. `param` is an optional {"schema": 1, "h": function} entry;
/// without it the minimal-norm (central) solution is returned.
CommandResult solve_problem(const Json& spec, const std::optional<Json>& param, const RunConfig& cfg);

/// CSV samples of the result's "f" on an n_r x n_theta polar grid with radii
/// up to r_max, rows radius-major and angle-minor. Rows at poles carry
/// "pole" in the value columns.
std::string eval_result_csv(const Json& result, int n_r, int n_theta, double r_max);

/// Maps a library exception to the CLI exit code.
int exit_code_for(const std::exception& e);

}  // namespace dbrinterp
