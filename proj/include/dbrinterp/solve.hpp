// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file solve.hpp
///
/// Solution formulas: the Douglas-lemma parametrization of contractive
/// solutions of AX = B, the route through an invertible Gram matrix, and the
/// general parametrization f = Gamma x~ + G h through the Redheffer colligation.
///

#pragma once

#include <optional>
#include <string>

#include "dbrinterp/aipdata.hpp"
#include "dbrinterp/redheffer.hpp"

namespace dbrinterp {

/// All contractions X with AX = B are X = X2^* X1 + (I - X2^* X2)^{1/2} K (I - X1^* X1)^{1/2},
/// K a contraction. Here (AA^*)^{1/2} X1 = B and (AA^*)^{1/2} X2 = A with
/// ranges inside closure Ran A.
struct DouglasParametrization {
  CMatrix X1;       ///< m x b
  CMatrix X2;       ///< m x a
  CMatrix defect1;  ///< (I - X1^* X1)^{1/2}, b x b
  CMatrix defect2;  ///< (I - X2^* X2)^{1/2}, a x a
  bool unique = false;

  /// Solution for the parameter K (a x b); K = 0 gives the minimal-norm solution.
  CMatrix solve(const CMatrix& K) const;
  CMatrix minimal() const;
};

/// Requires AA^* >= BB^*, else throws UnsolvableError carrying the minimum
/// eigenvalue of AA^* - BB^*.
DouglasParametrization douglas_factor(const CMatrix& A, const CMatrix& B, const Tolerances& tol = {});

/// Convenience wrapper; throws DomainError when K is not a contraction.
CMatrix douglas_solve(const CMatrix& A, const CMatrix& B, const CMatrix& K, const Tolerances& tol = {});

/// Solution family when P is invertible.
struct InverseRouteSolution {
  Realization f_min;  ///< F^S(z) P^{-1} x
  CMatrix P_inv;
  double x_tilde_norm = 0.0;  ///< ||P^{-1/2} x||
  double budget = 0.0;        ///< sqrt(1 - ||P^{-1/2} x||^2)
  bool unique = false;
  AipDataSet data;

  /// K_S(z, zeta) - F^S(z) P^{-1} F^S(zeta)^*, the kernel of the free part.
  CMatrix ktilde(cplx z, cplx zeta) const;
};

/// Throws PreconditionError when P is not positive definite and
/// UnsolvableError when P - xx^* is not PSD.
InverseRouteSolution solve_inverse_route(const AipDataSet& data, const CMatrix& P, const Tolerances& tol = {});

/// Realization of (E - S(z) N)(I - zT)^{-1} y.
Realization fs_times_vector(const AipDataSet& data, const CVector& y);

enum class Uniqueness { unique_by_budget, unique_by_dense_range, non_unique };
enum class CaseTag { delta_star_trivial, delta_trivial, general };

std::string to_string(Uniqueness u);
std::string to_string(CaseTag c);

struct UniquenessVerdict {
  Uniqueness uniqueness = Uniqueness::non_unique;
  CaseTag case_tag = CaseTag::general;
};

/// Classifies from ||x~||, the defect dimensions and, when supplied, the
/// parameter E (unique if K_E vanishes on sample points).
UniquenessVerdict classify_uniqueness(const RedhefferColligation& col, double x_tilde_norm,
                                      const Realization* param = nullptr, const Tolerances& tol = {});

/// x~ in X_0 coordinates with P^{1/2} x~ = x.
struct TargetLift {
  CVector x_tilde;
  double residual = 0.0;  ///< ||P^{1/2} x~ - x||
  bool in_range = false;  ///< residual <= rank_tol ||x||
};

TargetLift lift_target(const RedhefferColligation& col, const CVector& x, const Tolerances& tol = {});

struct SolutionFamily {
  CVector x_tilde;
  double budget = 0.0;
  Uniqueness uniqueness = Uniqueness::non_unique;
  CaseTag case_tag = CaseTag::general;
  SchurFunction param;  ///< the parameter E used for G and Gamma
  Realization f;        ///< Gamma x~ + G h
  Realization f_min;    ///< Gamma x~
  std::optional<double> h_norm;  ///< norm of h in H(K_E) when computable
  double lift_residual = 0.0;

  CMatrix gamma(const RedhefferColligation& col, cplx z) const;
  CMatrix g_mult(const RedhefferColligation& col, cplx z) const;
};

/// f = Gamma x~ + G h. Pass h = nullptr for the minimal-norm solution.
/// Throws UnsolvableError when x is not in Ran P^{1/2} or ||x~|| > 1, and
/// BudgetExceededError when ||h|| exceeds the budget (checked when computable).
SolutionFamily aip_solve(const AipDataSet& data, const RedhefferColligation& col, const SchurFunction& param,
                         const Realization* h = nullptr, const Tolerances& tol = {});

/// Norm of h in H(K_E) for constant or certified-inner E; nullopt otherwise.
std::optional<double> parameter_space_norm(const SchurFunction& param, const Realization& h,
                                           const Tolerances& tol = {});

}  // namespace dbrinterp
