// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file aipdata.hpp
///
/// Data sets {S, T, E, N, x} of the abstract interpolation problem, their Gram
/// operator P and the admissibility and solvability tests.
///

#pragma once

#include <optional>
#include <vector>

#include "dbrinterp/rational.hpp"

namespace dbrinterp {

/// Interpolation data. S maps C^p to C^q; T is n x n, E is q x n, N is p x n
/// and x has n entries.
struct AipDataSet {
  SchurFunction S;
  CMatrix T;
  CMatrix E;
  CMatrix N;
  CVector x;
  /// Gram operator, filled by the constructors that can compute it.
  std::optional<CMatrix> P;

  Index state_dim() const noexcept { return T.rows(); }
  Index input_dim() const noexcept { return S.input_dim(); }
  Index output_dim() const noexcept { return S.output_dim(); }
};

/// Checks shapes and that the spectral radius of T does not exceed
/// 1 + rank_tol. Throws DimensionError or DomainError.
AipDataSet make_aip_data(SchurFunction S, CMatrix T, CMatrix E, CMatrix N, CVector x, const Tolerances& tol = {});

/// Solution of G - T^* G T = E^* E. Throws IllPosedError when the pair is
/// not output stable.
CMatrix obs_gramian(const CMatrix& E, const CMatrix& T, const Tolerances& tol = {});

/// (E - S(z) N)(I - zT)^{-1}.
CMatrix eval_FS(const AipDataSet& data, cplx z);

/// P - T^* P T = E^* E - N^* N solved exactly; requires rho(T) < 1.
CMatrix compute_P_oap(const AipDataSet& data, const Tolerances& tol = {});

/// ||P - T^* P T - E^* E + N^* N||_F.
double stein_residual(const CMatrix& P, const CMatrix& T, const CMatrix& E, const CMatrix& N);

struct AdmissibilityReport {
  CMatrix P;
  double stein_residual = 0.0;
  bool stein_ok = false;
  bool obs_pairs_ok = false;
  /// max(0, -min eigenvalue) of the sampled kernel [[P, F(zj)^*], [F(zi), K_S(zi, zj)]].
  double fs_membership_residual = 0.0;
  bool fs_membership_ok = false;
  bool psd_ok = false;
  std::string membership_grid;

  bool admissible() const noexcept { return stein_ok && obs_pairs_ok && fs_membership_ok && psd_ok; }
};

/// Grid used by the membership test unless another one is supplied.
Grid membership_grid();

AdmissibilityReport check_admissible(const AipDataSet& data, const CMatrix& P, const Tolerances& tol = {},
                                     const Grid& grid = membership_grid());

struct Solvability {
  bool solvable = false;
  double margin = 0.0;  ///< minimum eigenvalue of P - x x^*
};

Solvability solvability(const CMatrix& P, const CVector& x, const Tolerances& tol = {});

struct KernelPositivity {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

/// Samples the kernel [[1, x^*, f(zj)^*], [x, P, F(zj)^*], [f(zi), F(zi), K_S(zi, zj)]]
/// on the given points and tests the assembled matrix for positivity.
KernelPositivity kernel_positivity_test(const AipDataSet& data, const CMatrix& P, const MatrixFunction& f,
                                        const std::vector<cplx>& points, const Tolerances& tol = {});

/// sum_n (T^*)^n E^* f_n computed from a realization of f.
CVector interp_functional(const AipDataSet& data, const Realization& f, const Tolerances& tol = {});

/// Conformal change of variable moving the point w to the origin:
/// T -> (conj(w) I - T)(I - wT)^{-1}, E and N -> sqrt(1-|w|^2) (.)(I - wT)^{-1},
/// S -> S o psi with the involution psi(z) = (w - z)/(1 - conj(w) z); x and P are kept.
AipDataSet mobius_transform(const AipDataSet& data, cplx w, const Tolerances& tol = {});

}  // namespace dbrinterp
