// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/redheffer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dbrinterp {

namespace {

CMatrix stack_rows(const CMatrix& top, const CMatrix& bottom) {
  CMatrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

CMatrix inverse_checked(const CMatrix& M, const char* what) {
  if (M.rows() == 0) return M;
  Eigen::PartialPivLU<CMatrix> lu(M);
  if (!(lu.rcond() > 1e-13)) throw NumericalError(std::string(what) + ": matrix is numerically singular");
  return lu.inverse();
}

void check_param(const RedhefferColligation& col, const Realization& param) {
  if (param.input_dim() != col.dims.delta || param.output_dim() != col.dims.delta_star) {
    std::ostringstream os;
    os << "parameter must map C^" << col.dims.delta << " to C^" << col.dims.delta_star << ", got "
       << param.output_dim() << "x" << param.input_dim();
    throw DimensionError(os.str());
  }
}

// Closed loop of Sigma with u2 = E y2. Since the (2,2) feedthrough of the
// colligation vanishes there is no algebraic loop.
struct ClosedLoop {
  CMatrix A, B, C, D;
};

ClosedLoop close_loop(const RedhefferColligation& col, const Realization& e) {
  const Index r = col.dims.x0;
  const Index m = e.state_dim();
  ClosedLoop cl;
  cl.A = CMatrix::Zero(r + m, r + m);
  cl.A.topLeftCorner(r, r) = col.A + col.B2 * e.D() * col.C2;
  cl.A.topRightCorner(r, m) = col.B2 * e.C();
  cl.A.bottomLeftCorner(m, r) = e.B() * col.C2;
  cl.A.bottomRightCorner(m, m) = e.A();
  cl.B = stack_rows(col.B1 + col.B2 * e.D() * col.D21, e.B() * col.D21);
  cl.C = CMatrix(col.dims.q, r + m);
  cl.C.leftCols(r) = col.C1 + col.D12 * e.D() * col.C2;
  cl.C.rightCols(m) = col.D12 * e.C();
  cl.D = col.D11 + col.D12 * e.D() * col.D21;
  return cl;
}

}  // namespace

Realization RedhefferColligation::sigma() const {
  const Index r = dims.x0;
  const Index ins = dims.p + dims.delta_star;
  const Index outs = dims.q + dims.delta;
  return Realization(U.topLeftCorner(r, r), U.topRightCorner(r, ins), U.bottomLeftCorner(outs, r),
                     U.bottomRightCorner(outs, ins));
}

RedhefferColligation build_colligation(const CMatrix& P, const CMatrix& T, const CMatrix& E, const CMatrix& N,
                                       const Tolerances& tol) {
  tol.validate();
  const Index n = T.rows();
  const Index q = E.rows();
  const Index p = N.rows();
  if (P.rows() != n || P.cols() != n || T.cols() != n || E.cols() != n || N.cols() != n) {
    throw DimensionError("build_colligation: P, T, E, N have inconsistent shapes");
  }
  RedhefferColligation col;
  col.dims.p = p;
  col.dims.q = q;

  const double rhs = (E.adjoint() * E).norm() + (N.adjoint() * N).norm();
  col.stein_residual = (P - T.adjoint() * P * T - E.adjoint() * E + N.adjoint() * N).norm();
  if (col.stein_residual > tol.residual_tol * (1.0 + rhs + P.norm())) {
    std::ostringstream os;
    os << "build_colligation: Stein identity fails, residual " << col.stein_residual;
    throw InconsistencyError(os.str(), col.stein_residual);
  }
  const PsdVerdict pv = psd_check(P, tol);
  if (!pv.is_psd) {
    std::ostringstream os;
    os.precision(17);
    os << "build_colligation: P is not positive semidefinite, min eigenvalue " << pv.min_eigenvalue;
    throw DomainError(os.str());
  }

  // X_0 from the eigenvectors of P with non-negligible eigenvalues, largest first.
  Index r = 0;
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((P + P.adjoint()) / 2.0);
    const Eigen::VectorXd lam = es.eigenvalues();
    const double cutoff = tol.rank_tol * std::max(lam.cwiseAbs().maxCoeff(), rhs);
    for (Index i = 0; i < n; ++i) r += lam(i) > cutoff ? 1 : 0;
    col.X0_basis.resize(n, r);
    col.sqrt_eigs.resize(r);
    for (Index k = 0; k < r; ++k) {
      col.X0_basis.col(k) = es.eigenvectors().col(n - 1 - k);
      col.sqrt_eigs(k) = std::sqrt(lam(n - 1 - k));
    }
  } else {
    col.X0_basis.resize(0, 0);
    col.sqrt_eigs.resize(0);
  }
  col.dims.x0 = r;
  col.R = col.sqrt_eigs.cast<cplx>().asDiagonal() * col.X0_basis.adjoint();

  const CMatrix Dm = stack_rows(col.R, N);
  const CMatrix Rg = stack_rows(col.R * T, E);

  Index rv = 0;
  CMatrix Ud = CMatrix::Identity(r + p, r + p);
  CMatrix W(r + q, 0);
  if (Dm.size() > 0) {
    Eigen::JacobiSVD<CMatrix> svd(Dm, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sig = svd.singularValues();
    const double cutoff = tol.rank_tol * std::max(sig.size() ? sig(0) : 0.0, 1e-300);
    for (Index i = 0; i < sig.size(); ++i) rv += sig(i) > cutoff ? 1 : 0;
    Ud = svd.matrixU();
    const CMatrix Vd = svd.matrixV();
    W = Rg * Vd.leftCols(rv) * sig.head(rv).cwiseInverse().cast<cplx>().asDiagonal();
    const CMatrix ker = Vd.rightCols(n - rv);
    col.kernel_leak = ker.cols() ? operator_norm(Rg * ker) : 0.0;
    const double leak_tol = std::sqrt(tol.residual_tol) * (1.0 + operator_norm(Rg));
    if (col.kernel_leak > leak_tol) {
      std::ostringstream os;
      os << "build_colligation: V is not well defined, kernel leak " << col.kernel_leak;
      throw InconsistencyError(os.str(), col.kernel_leak);
    }
  }
  col.dims.dv = rv;
  col.isometry_defect = rv ? (W.adjoint() * W - CMatrix::Identity(rv, rv)).norm() : 0.0;
  if (col.isometry_defect > std::sqrt(tol.residual_tol)) {
    std::ostringstream os;
    os << "build_colligation: V is not isometric on its domain, defect " << col.isometry_defect;
    throw InconsistencyError(os.str(), col.isometry_defect);
  }
  col.DV_basis = Ud.leftCols(rv);
  col.RV_basis = polar_isometry(W);
  col.Delta_basis = Ud.rightCols(r + p - rv);
  col.DeltaStar_basis = orthogonal_complement(col.RV_basis);
  col.dims.delta = col.Delta_basis.cols();
  col.dims.delta_star = col.DeltaStar_basis.cols();
  col.ident_i = col.Delta_basis.adjoint();
  col.ident_istar = col.DeltaStar_basis.adjoint();
  col.V = col.RV_basis * col.DV_basis.adjoint();

  const Index d = col.dims.delta;
  const Index ds = col.dims.delta_star;
  col.U = CMatrix::Zero(r + q + d, r + p + ds);
  col.U.topLeftCorner(r + q, r + p) = col.V;
  col.U.bottomLeftCorner(d, r + p) = col.ident_i;
  col.U.topRightCorner(r + q, ds) = col.DeltaStar_basis;

  col.A = col.U.block(0, 0, r, r);
  col.B1 = col.U.block(0, r, r, p);
  col.B2 = col.U.block(0, r + p, r, ds);
  col.C1 = col.U.block(r, 0, q, r);
  col.D11 = col.U.block(r, r, q, p);
  col.D12 = col.U.block(r, r + p, q, ds);
  col.C2 = col.U.block(r + q, 0, d, r);
  col.D21 = col.U.block(r + q, r, d, p);
  return col;
}

SigmaBlocks sigma_eval(const RedhefferColligation& col, cplx z) {
  const CMatrix Rz = resolvent(col.A, z);
  SigmaBlocks s;
  s.S11 = col.D11 + z * col.C1 * Rz * col.B1;
  s.S12 = col.D12 + z * col.C1 * Rz * col.B2;
  s.S21 = col.D21 + z * col.C2 * Rz * col.B1;
  s.S22 = z * col.C2 * Rz * col.B2;
  return s;
}

double sigma_kernel_residual(const RedhefferColligation& col, cplx z, cplx zeta) {
  const Realization sig = col.sigma();
  const CMatrix lhs = kernel_KS(sig, z, zeta);
  const CMatrix rhs = sig.C() * resolvent(col.A, z) * resolvent(col.A, zeta).adjoint() * sig.C().adjoint();
  return (lhs - rhs).norm();
}

double unitarity_defect(const RedhefferColligation& col) {
  const Index m = col.U.rows();
  const double a = (col.U.adjoint() * col.U - CMatrix::Identity(m, m)).norm();
  const double b = (col.U * col.U.adjoint() - CMatrix::Identity(m, m)).norm();
  return std::max(a, b);
}

CMatrix redheffer_apply(const RedhefferColligation& col, const CMatrix& Ez, cplx z) {
  const SigmaBlocks s = sigma_eval(col, z);
  if (Ez.rows() != col.dims.delta_star || Ez.cols() != col.dims.delta) {
    throw DimensionError("redheffer_apply: parameter value has the wrong shape");
  }
  if (Ez.size() == 0) return s.S11;
  const CMatrix Minv = inverse_checked(CMatrix::Identity(Ez.rows(), Ez.rows()) - Ez * s.S22, "redheffer_apply");
  return s.S11 + s.S12 * Minv * Ez * s.S21;
}

CMatrix redheffer_apply(const RedhefferColligation& col, const Realization& param, cplx z) {
  check_param(col, param);
  return redheffer_apply(col, param.eval(z), z);
}

GGamma compute_G_Gamma(const RedhefferColligation& col, const CMatrix& Ez, cplx z) {
  if (Ez.rows() != col.dims.delta_star || Ez.cols() != col.dims.delta) {
    throw DimensionError("compute_G_Gamma: parameter value has the wrong shape");
  }
  const SigmaBlocks s = sigma_eval(col, z);
  GGamma out;
  const CMatrix Minv = inverse_checked(CMatrix::Identity(Ez.rows(), Ez.rows()) - Ez * s.S22, "compute_G_Gamma");
  out.G = s.S12 * Minv;
  out.Gamma = (col.C1 + out.G * Ez * col.C2) * resolvent(col.A, z);
  return out;
}

GGamma compute_G_Gamma(const RedhefferColligation& col, const Realization& param, cplx z) {
  check_param(col, param);
  return compute_G_Gamma(col, param.eval(z), z);
}

Realization zero_parameter(const RedhefferColligation& col) {
  return Realization::constant(CMatrix::Zero(col.dims.delta_star, col.dims.delta));
}

Realization redheffer_realization(const RedhefferColligation& col, const Realization& param) {
  check_param(col, param);
  const ClosedLoop cl = close_loop(col, param);
  return Realization(cl.A, cl.B, cl.C, cl.D);
}

Realization G_realization(const RedhefferColligation& col, const Realization& param) {
  check_param(col, param);
  const ClosedLoop cl = close_loop(col, param);
  const CMatrix B = stack_rows(col.B2, CMatrix::Zero(param.state_dim(), col.dims.delta_star));
  return Realization(cl.A, B, cl.C, col.D12);
}

Realization Gamma_realization(const RedhefferColligation& col, const Realization& param, const CVector& v) {
  check_param(col, param);
  if (v.size() != col.dims.x0) throw DimensionError("Gamma_realization: vector must live in X_0 coordinates");
  const ClosedLoop cl = close_loop(col, param);
  CVector x0 = CVector::Zero(cl.A.rows());
  x0.head(v.size()) = v;
  // C (I - zA)^{-1} x0 = C x0 + z C (I - zA)^{-1} A x0
  return Realization(cl.A, cl.A * x0, cl.C, cl.C * x0);
}

RecoveredParameter recover_parameter(const RedhefferColligation& col, const MatrixFunction& S,
                                     const std::vector<cplx>& points, const Tolerances& tol, double max_residual) {
  RecoveredParameter out;
  out.points = points;
  out.unique = true;
  const Index d = col.dims.delta;
  const Index ds = col.dims.delta_star;
  for (const cplx z : points) {
    const SigmaBlocks s = sigma_eval(col, z);
    const CMatrix Sz = S(z);
    if (Sz.rows() != col.dims.q || Sz.cols() != col.dims.p) throw DimensionError("recover_parameter: S has the wrong shape");
    CMatrix Ez = CMatrix::Zero(ds, d);
    if (ds > 0 && d > 0) {
      const CMatrix W = pinv(s.S12, tol) * (Sz - s.S11) * pinv(s.S21, tol);
      Ez = W * inverse_checked(CMatrix::Identity(d, d) + s.S22 * W, "recover_parameter");
      if (numerical_rank(s.S12, tol, 1.0) < ds || numerical_rank(s.S21, tol, 1.0) < d) out.unique = false;
    }
    const double res = (redheffer_apply(col, Ez, z) - Sz).norm();
    const double nrm = operator_norm(Ez);
    out.max_residual = std::max(out.max_residual, res);
    out.max_norm = std::max(out.max_norm, nrm);
    if (res > max_residual * (1.0 + Sz.norm())) {
      std::ostringstream os;
      os.precision(17);
      os << "recover_parameter: S is not in the range of the Redheffer transform at z = " << z.real() << "+"
         << z.imag() << "i (residual " << res << ")";
      throw RecoveryError(os.str(), res);
    }
    if (nrm > 1.0 + std::sqrt(tol.psd_tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "recover_parameter: recovered value is not contractive (norm " << nrm << ")";
      throw RecoveryError(os.str(), nrm - 1.0);
    }
    out.values.push_back(std::move(Ez));
  }
  return out;
}

InjectivityReport injectivity_diagnostics(const CMatrix& T, const CMatrix& P, const RedhefferColligation& col,
                                          const Tolerances& tol) {
  const Index n = T.rows();
  if (P.rows() != n) throw DimensionError("injectivity_diagnostics: P and T differ in size");
  InjectivityReport rep;
  const CMatrix Ts = T.adjoint();
  rep.Tstar_injective = numerical_rank(Ts, tol) == n;

  CMatrix Tn = CMatrix::Identity(n, n);
  for (Index k = 0; k < n; ++k) Tn = Ts * Tn;
  const CMatrix ran = n ? range_basis(Tn, tol).range : CMatrix(0, 0);
  const CMatrix ker = n ? range_basis(Ts, tol).kernel : CMatrix(0, 0);
  if (ran.cols() == 0 || ker.cols() == 0) {
    rep.kernel_range_condition = true;
  } else {
    CMatrix both(n, ran.cols() + ker.cols());
    both << ran, ker;
    rep.kernel_range_condition = numerical_rank(both, tol, 1.0) == both.cols();
  }

  rep.kerD12_dim = col.dims.delta_star - numerical_rank(col.D12, tol, 1.0);
  const CMatrix TP = Ts * col.X0_basis * col.sqrt_eigs.cast<cplx>().asDiagonal();
  rep.ker_TstarP_dim = col.dims.x0 - numerical_rank(TP, tol, col.sqrt_eigs.size() ? col.sqrt_eigs(0) : 0.0);
  rep.D21_dense_range = numerical_rank(col.D21, tol, 1.0) == col.dims.delta;
  if (!rep.D21_dense_range) {
    throw InconsistencyError("injectivity_diagnostics: D21^* has a nontrivial kernel", 0.0);
  }
  return rep;
}

}  // namespace dbrinterp
