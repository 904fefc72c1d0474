// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file oap.hpp
///
/// Interpolation with operator argument: the left-tangential evaluation
/// sum_n (T^*)^n E^* f_n = x in H(K_S), its reduction to the abstract problem,
/// and the explicit H^2 solver with the inner function B.
///

#pragma once

#include <vector>

#include "dbrinterp/aipdata.hpp"

namespace dbrinterp {

/// N = sum_j S_j^* E T^j, computed through a Sylvester-Stein solve on the
/// realization of S.
CMatrix build_N(const SchurFunction& S, const CMatrix& E, const CMatrix& T, const Tolerances& tol = {});

/// Data {S, T, E, build_N(S, E, T), x} with P filled in.
AipDataSet oap_to_aip(const SchurFunction& S, const CMatrix& E, const CMatrix& T, const CVector& x,
                      const Tolerances& tol = {});

struct H2Solution {
  CMatrix P;
  Realization f_min;  ///< E (I - zT)^{-1} P^{-1} x
  SchurFunction B;    ///< inner, with K_B(z, zeta) = E (I-zT)^{-1} P^{-1} (I - conj(zeta) T^*)^{-1} E^*
  double budget = 0.0;
  double margin = 0.0;  ///< min eigenvalue of P - xx^*
};

/// All solutions are f_min + B h with ||h||_{H^2} <= budget. Throws
/// PreconditionError when P is singular and UnsolvableError when P - xx^*
/// is not PSD.
H2Solution h2_solve(const CMatrix& E, const CMatrix& T, const CVector& x, const Tolerances& tol = {});

/// Residual of K_B(z, zeta) against E (I-zT)^{-1} P^{-1} (I - conj(zeta) T^*)^{-1} E^*.
double inner_kernel_residual(const H2Solution& s, const CMatrix& E, const CMatrix& T, cplx z, cplx zeta);

struct InterpData {
  CMatrix E;
  CMatrix T;
  CVector x;
};

/// Nevanlinna-Pick nodes: T = diag(conj(w_i)), E = row of ones, x = targets,
/// so the conditions read f(w_i) = x_i. Throws DomainError on repeated nodes
/// or nodes outside the open disk.
InterpData np_data(const std::vector<cplx>& nodes, const std::vector<cplx>& targets);

/// Caratheodory-Fejer data at w: T = conj(w) I + upper shift, E = e_0^T,
/// conditions f^{(k)}(w)/k! = x_k for k < m.
InterpData cf_data(cplx w, const std::vector<cplx>& taylor_targets);

}  // namespace dbrinterp
