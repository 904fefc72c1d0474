// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dbrinterp {

namespace {

CMatrix defect_root(const CMatrix& X, const Tolerances& tol) {
  const Index k = X.cols();
  CMatrix M = CMatrix::Identity(k, k) - X.adjoint() * X;
  return sqrt_psd((M + M.adjoint()) / 2.0, tol);
}

bool is_isometric(const CMatrix& X, const Tolerances& tol) {
  return (X.adjoint() * X - CMatrix::Identity(X.cols(), X.cols())).norm() <= std::sqrt(tol.residual_tol);
}

}  // namespace

CMatrix DouglasParametrization::solve(const CMatrix& K) const {
  if (K.rows() != X2.cols() || K.cols() != X1.cols()) throw DimensionError("douglas: parameter K has the wrong shape");
  return X2.adjoint() * X1 + defect2 * K * defect1;
}

CMatrix DouglasParametrization::minimal() const { return X2.adjoint() * X1; }

DouglasParametrization douglas_factor(const CMatrix& A, const CMatrix& B, const Tolerances& tol) {
  if (A.rows() != B.rows()) throw DimensionError("douglas_factor: A and B must have the same number of rows");
  const CMatrix H = A * A.adjoint();
  const PsdVerdict v = psd_check(H - B * B.adjoint(), tol);
  if (!v.is_psd) {
    std::ostringstream os;
    os.precision(17);
    os << "douglas_factor: AA^* - BB^* is not PSD, min eigenvalue " << v.min_eigenvalue;
    throw UnsolvableError(os.str(), v.min_eigenvalue);
  }
  // With A = U S V^*, (AA^*)^{1/2} = U S U^*, so X2 = U_r V_r^* and
  // X1 = U_r S_r^{-1} U_r^* B. Working from the SVD of A avoids squaring its condition.
  const Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = tol.rank_tol * (s.size() > 0 ? s(0) : 0.0);
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  const CMatrix Ur = svd.matrixU().leftCols(r);
  const CMatrix Vr = svd.matrixV().leftCols(r);
  DouglasParametrization d;
  d.X1 = Ur * s.head(r).cwiseInverse().cast<cplx>().asDiagonal() * Ur.adjoint() * B;
  d.X2 = Ur * Vr.adjoint();
  d.defect1 = defect_root(d.X1, tol);
  // X2 is a partial isometry, so its defect is the projection onto Ker A.
  d.defect2 = CMatrix::Identity(A.cols(), A.cols()) - Vr * Vr.adjoint();
  d.unique = is_isometric(d.X1, tol) || is_isometric(d.X2, tol);
  return d;
}

CMatrix douglas_solve(const CMatrix& A, const CMatrix& B, const CMatrix& K, const Tolerances& tol) {
  if (operator_norm(K) > 1.0 + tol.psd_tol) throw DomainError("douglas_solve: K is not a contraction");
  return douglas_factor(A, B, tol).solve(K);
}

Realization fs_times_vector(const AipDataSet& data, const CVector& y) {
  const Realization ey(data.T, data.T * y, data.E, data.E * y);
  const Realization ny(data.T, data.T * y, data.N, data.N * y);
  return ey - data.S.realization * ny;
}

CMatrix InverseRouteSolution::ktilde(cplx z, cplx zeta) const {
  return kernel_KS(data.S.realization, z, zeta) - eval_FS(data, z) * P_inv * eval_FS(data, zeta).adjoint();
}

InverseRouteSolution solve_inverse_route(const AipDataSet& data, const CMatrix& P, const Tolerances& tol) {
  const Index n = data.state_dim();
  if (P.rows() != n || P.cols() != n) throw DimensionError("solve_inverse_route: P must be n x n");
  const PsdVerdict pv = psd_check(P, tol);
  if (!pv.is_hermitian || pv.min_eigenvalue < tol.psd_tol) {
    throw PreconditionError("solve_inverse_route: P is not positive definite; use the colligation route");
  }
  const Solvability s = solvability(P, data.x, tol);
  if (!s.solvable) throw UnsolvableError("solve_inverse_route: P - xx^* is not PSD", s.margin);

  InverseRouteSolution out;
  out.data = data;
  Eigen::LLT<CMatrix> llt((P + P.adjoint()) / 2.0);
  out.P_inv = llt.solve(CMatrix::Identity(n, n));
  const CVector y = out.P_inv * data.x;
  out.x_tilde_norm = std::sqrt(std::max(0.0, data.x.dot(y).real()));
  out.budget = std::sqrt(std::max(0.0, 1.0 - out.x_tilde_norm * out.x_tilde_norm));
  out.f_min = fs_times_vector(data, y);

  out.unique = std::abs(out.x_tilde_norm - 1.0) <= tol.psd_tol;
  if (!out.unique) {
    const Grid g = Grid::polar(3, 6, 0.8);
    double worst = 0.0;
    double scale = 0.0;
    for (const cplx z : g.points) {
      for (const cplx w : g.points) {
        worst = std::max(worst, out.ktilde(z, w).norm());
        scale = std::max(scale, kernel_KS(data.S.realization, z, w).norm());
      }
    }
    out.unique = worst <= std::sqrt(tol.residual_tol) * (1.0 + scale);
  }
  return out;
}

std::string to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::unique_by_budget: return "unique_by_budget";
    case Uniqueness::unique_by_dense_range: return "unique_by_dense_range";
    case Uniqueness::non_unique: return "non_unique";
  }
  return "non_unique";
}

std::string to_string(CaseTag c) {
  switch (c) {
    case CaseTag::delta_star_trivial: return "delta_star_trivial";
    case CaseTag::delta_trivial: return "delta_trivial";
    case CaseTag::general: return "general";
  }
  return "general";
}

UniquenessVerdict classify_uniqueness(const RedhefferColligation& col, double x_tilde_norm,
                                      const Realization* param, const Tolerances& tol) {
  UniquenessVerdict v;
  if (col.dims.delta_star == 0) {
    v.case_tag = CaseTag::delta_star_trivial;
  } else if (col.dims.delta == 0) {
    v.case_tag = CaseTag::delta_trivial;
  }
  if (std::abs(x_tilde_norm - 1.0) <= tol.psd_tol) {
    v.uniqueness = Uniqueness::unique_by_budget;
    return v;
  }
  if (col.dims.delta_star == 0) {
    v.uniqueness = Uniqueness::unique_by_dense_range;
    return v;
  }
  if (param != nullptr && col.dims.delta > 0) {
    // The parameter space H(K_E) is trivial iff K_E vanishes identically.
    const Grid g = Grid::polar(2, 5, 0.7);
    double worst = 0.0;
    for (const cplx z : g.points) worst = std::max(worst, kernel_KS(*param, z, z).norm());
    if (worst <= tol.psd_tol) v.uniqueness = Uniqueness::unique_by_dense_range;
  }
  return v;
}

TargetLift lift_target(const RedhefferColligation& col, const CVector& x, const Tolerances& tol) {
  if (x.size() != col.X0_basis.rows()) throw DimensionError("lift_target: x has the wrong size");
  TargetLift t;
  const CVector c = col.X0_basis.adjoint() * x;
  t.x_tilde = col.sqrt_eigs.cwiseInverse().cast<cplx>().asDiagonal() * c;
  t.residual = (col.X0_basis * c - x).norm();
  t.in_range = t.residual <= tol.rank_tol * x.norm();
  return t;
}

CMatrix SolutionFamily::gamma(const RedhefferColligation& col, cplx z) const {
  return compute_G_Gamma(col, param.realization, z).Gamma;
}

CMatrix SolutionFamily::g_mult(const RedhefferColligation& col, cplx z) const {
  return compute_G_Gamma(col, param.realization, z).G;
}

std::optional<double> parameter_space_norm(const SchurFunction& param, const Realization& h, const Tolerances& tol) {
  if (!h.is_stable()) return std::nullopt;
  const Realization& e = param.realization;
  if (e.state_dim() == 0) {
    const Index k = e.output_dim();
    const CMatrix M = CMatrix::Identity(k, k) - e.D() * e.D().adjoint();
    if (!psd_check(M, tol).is_psd) return std::nullopt;
    const CMatrix root = sqrt_psd(M, tol);
    const CMatrix root_inv = pinv(root, tol);
    const CMatrix proj = CMatrix::Identity(k, k) - root * root_inv;
    if (h2_norm(proj * h, tol) > std::sqrt(tol.residual_tol)) return std::numeric_limits<double>::infinity();
    return h2_norm(root_inv * h, tol);
  }
  if (param.certified_inner) return h2_norm(h, tol);
  return std::nullopt;
}

SolutionFamily aip_solve(const AipDataSet& data, const RedhefferColligation& col, const SchurFunction& param,
                         const Realization* h, const Tolerances& tol) {
  const TargetLift lift = lift_target(col, data.x, tol);
  if (!lift.in_range) {
    std::ostringstream os;
    os << "aip_solve: x is not in the range of P^{1/2} (residual " << lift.residual << ")";
    throw UnsolvableError(os.str(), -lift.residual);
  }
  const double xn = lift.x_tilde.norm();
  if (xn > 1.0 + tol.psd_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "aip_solve: ||x~|| = " << xn << " exceeds 1";
    throw UnsolvableError(os.str(), 1.0 - xn * xn);
  }
  SolutionFamily s;
  s.x_tilde = lift.x_tilde;
  s.lift_residual = lift.residual;
  s.budget = std::sqrt(std::max(0.0, 1.0 - xn * xn));
  s.param = param;
  s.f_min = Gamma_realization(col, param.realization, lift.x_tilde);
  s.f = s.f_min;
  if (h != nullptr) {
    if (h->output_dim() != col.dims.delta_star || h->input_dim() != 1) {
      throw DimensionError("aip_solve: h must be a column function with dim Delta_* entries");
    }
    s.h_norm = parameter_space_norm(param, *h, tol);
    if (s.h_norm && *s.h_norm > s.budget + tol.psd_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "aip_solve: budget exceeded, ||h|| = " << *s.h_norm << " > " << s.budget;
      throw BudgetExceededError(os.str(), s.budget - *s.h_norm);
    }
    s.f = s.f_min + G_realization(col, param.realization) * (*h);
  }
  const UniquenessVerdict v = classify_uniqueness(col, xn, &param.realization, tol);
  s.uniqueness = v.uniqueness;
  s.case_tag = v.case_tag;
  return s;
}

}  // namespace dbrinterp
