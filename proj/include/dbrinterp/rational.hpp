// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file rational.hpp
///
/// Rational matrix functions R(z) = D + z C (I - zA)^{-1} B given by
/// state-space realizations, together with the de Branges-Rovnyak kernel,
/// finite Blaschke products, grid certification of the Schur class and exact
/// H^2 inner products.
///

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dbrinterp/numlin.hpp"

namespace dbrinterp {

/// Matrix-valued function evaluated pointwise.
using MatrixFunction = std::function<CMatrix(cplx)>;

/// Realization (A, B, C, D) of R(z) = D + z C (I - zA)^{-1} B.
/// State dimension n, input dimension p = cols(D), output dimension q = rows(D).
class Realization {
 public:
  Realization() : Realization(CMatrix(0, 0), CMatrix(0, 0), CMatrix(0, 0), CMatrix(0, 0)) {}
  Realization(CMatrix A, CMatrix B, CMatrix C, CMatrix D);

  /// State-free realization of the constant function D.
  static Realization constant(const CMatrix& D);
  /// R(z) = z I_m.
  static Realization shift(Index m = 1);

  const CMatrix& A() const noexcept { return A_; }
  const CMatrix& B() const noexcept { return B_; }
  const CMatrix& C() const noexcept { return C_; }
  const CMatrix& D() const noexcept { return D_; }

  Index state_dim() const noexcept { return A_.rows(); }
  Index input_dim() const noexcept { return D_.cols(); }
  Index output_dim() const noexcept { return D_.rows(); }
  double spectral_radius() const noexcept { return rho_; }
  bool is_stable() const noexcept { return rho_ < 1.0; }

  /// D + z C (I - zA)^{-1} B. Throws PoleError when I - zA is singular.
  CMatrix eval(cplx z) const;
  CMatrix operator()(cplx z) const { return eval(z); }

  /// [D, CB, CAB, ..., CA^{m-2}B] (m coefficients).
  std::vector<CMatrix> taylor_coeffs(Index m) const;

  /// Taylor coefficients R^{(j)}(w)/j!, j < m, around a point w where I - wA
  /// is invertible (w may lie on the unit circle).
  std::vector<CMatrix> taylor_at(cplx w, Index m) const;

  MatrixFunction as_function() const;

 private:
  CMatrix A_, B_, C_, D_;
  double rho_ = 0.0;
};

/// (I - zA)^{-1} with pole detection.
CMatrix resolvent(const CMatrix& A, cplx z);

/// Series connection: (lhs * rhs)(z) = lhs(z) rhs(z).
Realization operator*(const Realization& lhs, const Realization& rhs);
/// Parallel connection.
Realization operator+(const Realization& lhs, const Realization& rhs);
Realization operator-(const Realization& lhs, const Realization& rhs);
/// Constant factors on either side.
Realization operator*(const CMatrix& M, const Realization& R);
Realization operator*(const Realization& R, const CMatrix& M);
Realization operator*(cplx c, const Realization& R);

/// Block row [R1 R2] sharing output space.
Realization hstack(const Realization& lhs, const Realization& rhs);
/// Block column [R1; R2] sharing input space.
Realization vstack(const Realization& top, const Realization& bottom);

/// R~(z) = R(psi(z)) with psi(z) = (w - z)/(1 - conj(w) z), the involutive
/// disk automorphism exchanging 0 and w. Requires I - wA invertible.
Realization compose_involution(const Realization& R, cplx w);

/// Evaluation grid with a label recording how it was generated.
struct Grid {
  std::vector<cplx> points;
  std::string label;

  /// n_r radii equispaced in (0, r_max] times n_theta equispaced angles.
  static Grid polar(int n_r = 21, int n_theta = 21, double r_max = 0.995);
  /// m equispaced points on the unit circle starting at 1.
  static Grid circle(int m = 64);
};

/// Schur-class candidate with grid certificates.
struct SchurFunction {
  Realization realization;
  bool certified_contractive = false;
  bool certified_inner = false;
  std::string contractive_grid;  ///< label of the disk grid used
  std::string inner_grid;        ///< label of the circle grid used

  CMatrix eval(cplx z) const { return realization.eval(z); }
  Index input_dim() const noexcept { return realization.input_dim(); }
  Index output_dim() const noexcept { return realization.output_dim(); }
};

/// Wraps a realization without running certification.
SchurFunction uncertified(Realization R);

/// (I - S(z) S(zeta)^*) / (1 - z conj(zeta)); throws DomainError when
/// z conj(zeta) is numerically 1.
CMatrix kernel_KS(const Realization& S, cplx z, cplx zeta);
/// Same kernel from precomputed values S(z), S(zeta).
CMatrix kernel_from_values(const CMatrix& Sz, const CMatrix& Szeta, cplx z, cplx zeta);

/// Finite Blaschke product phase * prod (z - a)/(1 - conj(a) z), realized as a
/// cascade of elementary unitary colligations. State dimension equals the
/// number of zeros; certified inner on a 64-point circle grid.
SchurFunction blaschke(const std::vector<cplx>& zeros, cplx phase = 1.0, const Tolerances& tol = {});

/// Sets the contractive flag iff max |S(z)| <= 1 + psd_tol over disk_grid and
/// the inner flag iff max |S(t)^* S(t) - I| <= residual_tol over circle_grid.
SchurFunction certify_schur(const Realization& S, const Grid& disk_grid = Grid::polar(),
                            const Grid& circle_grid = Grid::circle(), const Tolerances& tol = {});

/// <f, g>_{H^2} = sum_n trace(g_n^* f_n), exact via a Sylvester-Stein solve.
cplx h2_inner_product(const Realization& f, const Realization& g, const Tolerances& tol = {});
double h2_norm(const Realization& f, const Tolerances& tol = {});

/// Observability Gramian sum_n (A^*)^n C^* C A^n of a stable realization.
CMatrix realization_obs_gramian(const Realization& R, const Tolerances& tol = {});

}  // namespace dbrinterp
