// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file boundary.hpp
///
/// Scalar boundary interpolation in H(K_s) for a finite Blaschke product s:
/// boundary Taylor data, boundary reproducing kernels, the structured data
/// {T, E, N, x}, the closed-form Gram matrix P and the solve path with radial
/// verification of the minimal solution.
///

#pragma once

#include <optional>
#include <vector>

#include "dbrinterp/aipdata.hpp"
#include "dbrinterp/redheffer.hpp"
#include "dbrinterp/solve.hpp"

namespace dbrinterp {

/// Boundary data: nodes t_i = exp(i angle_i) with orders n_i and targets
/// f_{i,j} = f^{(j)}(t_i)/j! for j <= n_i.
struct BoundaryDataSet {
  SchurFunction s;
  std::vector<double> angles;
  std::vector<Index> orders;
  std::vector<std::vector<cplx>> targets;

  cplx node(std::size_t i) const { return std::polar(1.0, angles[i]); }
  Index total_conditions() const;
};

/// Validates that s is scalar and certified inner, that the nodes are
/// distinct and that target lengths match the orders. Throws DomainError or
/// DimensionError.
BoundaryDataSet make_boundary_data(SchurFunction s, std::vector<double> angles, std::vector<Index> orders,
                                   std::vector<std::vector<cplx>> targets, const Tolerances& tol = {});

/// s_0, ..., s_m with s_j = s^{(j)}(t)/j!. Throws PoleError when s has a pole at t.
std::vector<cplx> boundary_taylor(const SchurFunction& s, cplx t, Index m);

/// K_{t,j}(z) = z^j/(1 - z conj(t))^{j+1} - s(z) sum_{l<=j} z^{j-l} conj(s_l)/(1 - z conj(t))^{j+1-l}.
cplx boundary_kernel(const SchurFunction& s, cplx t, Index j, cplx z);

struct BoundaryMatrices {
  CMatrix T;  ///< block diagonal, conj(t_i) I + upper shift
  CMatrix E;  ///< row of e_0 blocks
  CMatrix N;  ///< row of [conj(s_{i,0}) ... conj(s_{i,n_i})] blocks
  CVector x;  ///< column of targets f_{i,j}
};

BoundaryMatrices build_boundary_data(const BoundaryDataSet& bd);

/// Closed-form Gram matrix P_ab = <F e_b, F e_a> in terms of the boundary
/// Taylor coefficients s_{i,0..2n_i+1}. Throws DomainError when the closed
/// form is not Hermitian within residual_tol.
CMatrix compute_P_boundary(const BoundaryDataSet& bd, const Tolerances& tol = {});

/// Independent Gram matrix of the boundary kernels from the realization of s:
/// P = V^* G^{-1} V with G the observability Gramian and
/// v_{t,j} = (A^*)^j (I - conj(t) A^*)^{-(j+1)} C^*.
CMatrix boundary_gram_oracle(const BoundaryDataSet& bd, const Tolerances& tol = {});

/// max |F^s(z) e_a - K_{t_i,j}(z)| over the points.
double fs_kernel_residual(const BoundaryDataSet& bd, const std::vector<cplx>& points);

struct RadialRow {
  Index node = 0;
  Index order = 0;
  cplx target = 0.0;
  cplx extrapolated = 0.0;  ///< limit of f^{(j)}(r t)/j! as r -> 1
  cplx last_sample = 0.0;   ///< value at the largest sampled radius
  double error = 0.0;       ///< |extrapolated - target|
};

/// Taylor coefficients of f at r t_i for r = 1 - 2^{-m}, m = 4..12,
/// extrapolated to r = 1 by polynomial (Neville) extrapolation in 1 - r.
std::vector<RadialRow> radial_check(const BoundaryDataSet& bd, const Realization& f);

struct BoundarySolution {
  AipDataSet data;
  CMatrix P;
  double stein_residual = 0.0;
  double margin = 0.0;
  RedhefferColligation colligation;
  CVector x_tilde;
  double budget = 0.0;
  Uniqueness uniqueness = Uniqueness::non_unique;
  CaseTag case_tag = CaseTag::general;
  Realization f_min;  ///< F^s P^+ x as a realization over the state space of s
  bool recovered = false;
  double recovery_residual = 0.0;
  std::optional<double> gamma_residual;  ///< |Gamma(z) x~ - f_min(z)| over the recovery points
  std::vector<RadialRow> radial;
  double max_radial_error = 0.0;
};

/// Throws UnsolvableError when P - x x^* is not PSD and InconsistencyError
/// when the injected P fails the Stein identity.
BoundarySolution solve_boundary(const BoundaryDataSet& bd, const Tolerances& tol = {});

}  // namespace dbrinterp
