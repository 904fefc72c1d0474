// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file numlin.hpp
///
/// Dense complex linear algebra kernel: PSD calculus, numerical range and
/// kernel, Moore-Penrose inverse, Stein solves and unitary completion.
///
/// Every routine is a pure function of its arguments.
///

#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "dbrinterp/errors.hpp"

namespace dbrinterp {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by all modules.
///
/// - rank_tol:     singular values below rank_tol * sigma_max count as zero
/// - psd_tol:      eigenvalue floor for positive semidefiniteness
/// - residual_tol: equation residual threshold, usually scaled by (1 + |input|)
struct Tolerances {
  double rank_tol = 1e-10;
  double psd_tol = 1e-9;
  double residual_tol = 1e-9;

  /// Throws DomainError unless all three are strictly positive and finite.
  void validate() const;
};

struct PsdVerdict {
  bool is_hermitian = false;
  bool is_psd = false;
  double min_eigenvalue = 0.0;
};

/// Hermitian/PSD verdict of a square matrix. The eigenvalues are those of the
/// Hermitian part. An empty matrix is PSD with min_eigenvalue = +inf.
PsdVerdict psd_check(const CMatrix& H, const Tolerances& tol = {});

/// Hermitian PSD square root. Eigenvalues in [-psd_tol, 0] are clamped to 0.
CMatrix sqrt_psd(const CMatrix& H, const Tolerances& tol = {});

/// Moore-Penrose inverse with relative singular-value cutoff.
CMatrix pinv(const CMatrix& M, const Tolerances& tol = {});

struct RangeKernel {
  CMatrix range;   ///< orthonormal columns spanning the numerical range
  CMatrix kernel;  ///< orthonormal columns spanning the numerical kernel
};

/// Orthonormal bases of the numerical range and kernel of M. Singular values
/// below rank_tol * max(sigma_max, reference_scale) are treated as zero.
RangeKernel range_basis(const CMatrix& M, const Tolerances& tol = {}, double reference_scale = 0.0);

/// Numerical rank with the same cutoff rule as range_basis.
Index numerical_rank(const CMatrix& M, const Tolerances& tol = {}, double reference_scale = 0.0);

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns Q inside C^{Q.rows()}.
CMatrix orthogonal_complement(const CMatrix& Q);

double spectral_radius(const CMatrix& A);

/// Unique solution P of P - T^* P T = Q for spectral radius of T below one.
/// Throws IllPosedError when rho(T) >= 1 and NumericalError if the
/// vectorized system is singular.
CMatrix solve_stein(const CMatrix& T, const CMatrix& Q, const Tolerances& tol = {});

/// Solution X of X - L X R = Q via the vectorized system (I - R^T (x) L).
/// Requires rho(L) * rho(R) < 1.
CMatrix solve_sylvester_stein(const CMatrix& L, const CMatrix& R, const CMatrix& Q,
                              const Tolerances& tol = {});

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

enum class SchurPivot { upper_left, lower_right };

/// Schur complement of the 2x2 partition of M with leading block of size
/// `split`. Pivot upper_left returns D - C A^+ B; lower_right returns
/// A - B D^+ C. Pseudoinverses cover singular pivots.
CMatrix schur_complement(const CMatrix& M, Index split, SchurPivot which, const Tolerances& tol = {});

/// Positivity of a Hermitian M through pivot, complement and the range
/// condition on the off-diagonal block.
bool psd_by_schur(const CMatrix& M, Index split, SchurPivot which, const Tolerances& tol = {});

/// Completes the isometric columns V to a square unitary U whose leading
/// columns equal V. Added columns come from pivoted Gram-Schmidt on the
/// standard basis (largest residual first, ties to the lowest index), which
/// makes the result deterministic.
CMatrix unitary_completion(const CMatrix& V, const Tolerances& tol = {});

/// Nearest matrix with orthonormal columns (polar factor).
CMatrix polar_isometry(const CMatrix& W);

/// Largest singular value; zero for empty matrices.
double operator_norm(const CMatrix& M);

/// Throws DomainError when M has a NaN or infinite entry.
void require_finite(const CMatrix& M, const char* what);

}  // namespace dbrinterp
