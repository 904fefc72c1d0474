// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file redheffer.hpp
///
/// Unitary colligation built from interpolation data, its characteristic
/// function Sigma, the Redheffer transform S = Sigma11 + Sigma12 (I - E Sigma22)^{-1} E Sigma21
/// and the multipliers G and Gamma. All parameters E map the defect
/// coordinates C^{dim Delta} to C^{dim Delta_*}.
///

#pragma once

#include <vector>

#include "dbrinterp/rational.hpp"

namespace dbrinterp {

struct ColligationDims {
  Index x0 = 0;          ///< dim X_0 = rank P
  Index dv = 0;          ///< dim of the domain of V
  Index delta = 0;       ///< dim Delta
  Index delta_star = 0;  ///< dim Delta_*
  Index p = 0;
  Index q = 0;
};

/// Colligation
///
///        X0    U   D*~              X0    U   D*~
///   U = [ A   B1   B2 ]  : C^r (+) C^p (+) C^{d*} -> C^r (+) C^q (+) C^{d}
///       [ C1  D11  D12]
///       [ C2  D21   0 ]
///
/// X_0 = closure Ran P^{1/2} is coordinatized by the eigenvectors X0_basis of P
/// with eigenvalues sqrt_eigs^2; in those coordinates P^{1/2} acts as
/// R = diag(sqrt_eigs) X0_basis^*.
struct RedhefferColligation {
  CMatrix X0_basis;         ///< n x r
  Eigen::VectorXd sqrt_eigs;
  CMatrix R;                ///< r x n
  CMatrix DV_basis;         ///< (r+p) x dv
  CMatrix RV_basis;         ///< (r+q) x dv, image of DV_basis under V
  CMatrix Delta_basis;      ///< (r+p) x d
  CMatrix DeltaStar_basis;  ///< (r+q) x d*
  CMatrix ident_i;          ///< d x (r+p), Delta_basis^*
  CMatrix ident_istar;      ///< d* x (r+q), DeltaStar_basis^*
  CMatrix V;                ///< (r+q) x (r+p) partial isometry
  CMatrix U;                ///< (r+q+d) x (r+p+d*)
  CMatrix A, B1, B2, C1, C2, D11, D12, D21;
  ColligationDims dims;
  double stein_residual = 0.0;
  double kernel_leak = 0.0;     ///< ||[P^{1/2}T; E] k|| over the numerical kernel of [P^{1/2}; N]
  double isometry_defect = 0.0; ///< ||W^* W - I|| of V on its domain before polar cleanup

  /// Characteristic function with inputs C^p (+) C^{d*} and outputs C^q (+) C^d.
  Realization sigma() const;
};

/// Builds the colligation from {P, T, E, N}. Throws InconsistencyError when the
/// Stein identity fails or V is not well defined, DomainError when P is not PSD.
RedhefferColligation build_colligation(const CMatrix& P, const CMatrix& T, const CMatrix& E, const CMatrix& N,
                                       const Tolerances& tol = {});

struct SigmaBlocks {
  CMatrix S11, S12, S21, S22;
};

SigmaBlocks sigma_eval(const RedhefferColligation& col, cplx z);

/// Residual of (I - Sigma(z)Sigma(zeta)^*)/(1 - z conj(zeta)) = C (I-zA)^{-1} (I - conj(zeta) A^*)^{-1} C^*.
double sigma_kernel_residual(const RedhefferColligation& col, cplx z, cplx zeta);

/// ||U^* U - I||_F and ||U U^* - I||_F.
double unitarity_defect(const RedhefferColligation& col);

/// S(z) for a parameter value E(z) (d* x d). Throws NumericalError when
/// I - E(z) Sigma22(z) is numerically singular.
CMatrix redheffer_apply(const RedhefferColligation& col, const CMatrix& Ez, cplx z);
CMatrix redheffer_apply(const RedhefferColligation& col, const Realization& param, cplx z);

struct GGamma {
  CMatrix G;      ///< q x d*
  CMatrix Gamma;  ///< q x r
};

GGamma compute_G_Gamma(const RedhefferColligation& col, const CMatrix& Ez, cplx z);
GGamma compute_G_Gamma(const RedhefferColligation& col, const Realization& param, cplx z);

/// Exact closed-loop realizations for a rational parameter. The parameter
/// realization must map C^d to C^{d*}.
Realization redheffer_realization(const RedhefferColligation& col, const Realization& param);
Realization G_realization(const RedhefferColligation& col, const Realization& param);
/// Gamma(z) v as a function of z for the fixed state vector v (r entries).
Realization Gamma_realization(const RedhefferColligation& col, const Realization& param, const CVector& v);

/// Zero parameter of the right shape.
Realization zero_parameter(const RedhefferColligation& col);

struct RecoveredParameter {
  std::vector<cplx> points;
  std::vector<CMatrix> values;  ///< E(z) at each point, d* x d
  double max_residual = 0.0;    ///< max ||R_Sigma[E](z) - S(z)||_F
  double max_norm = 0.0;        ///< max ||E(z)||
  bool unique = false;          ///< Sigma12 injective and Sigma21 onto at every point
};

/// Pointwise inversion W = Sigma12^+ (S - Sigma11) Sigma21^+, E = W (I + Sigma22 W)^{-1}.
/// Throws RecoveryError when the reconstruction residual exceeds max_residual
/// or a recovered value is not contractive.
RecoveredParameter recover_parameter(const RedhefferColligation& col, const MatrixFunction& S,
                                     const std::vector<cplx>& points, const Tolerances& tol = {},
                                     double max_residual = 1e-7);

struct InjectivityReport {
  bool Tstar_injective = false;
  bool kernel_range_condition = false;  ///< Ran (T^*)^n meets Ker T^* only at 0
  Index kerD12_dim = 0;
  Index ker_TstarP_dim = 0;  ///< dim Ker T^* P^{1/2} restricted to X_0
  bool D21_dense_range = false;

  bool passes() const noexcept { return Tstar_injective || kernel_range_condition; }
};

/// Throws InconsistencyError if D21^* has a nontrivial kernel.
InjectivityReport injectivity_diagnostics(const CMatrix& T, const CMatrix& P, const RedhefferColligation& col,
                                          const Tolerances& tol = {});

}  // namespace dbrinterp
