// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/aipdata.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dbrinterp {

AipDataSet make_aip_data(SchurFunction S, CMatrix T, CMatrix E, CMatrix N, CVector x, const Tolerances& tol) {
  tol.validate();
  const Index n = T.rows();
  const Index p = S.input_dim();
  const Index q = S.output_dim();
  if (T.cols() != n) throw DimensionError("aip data: T must be square");
  if (E.rows() != q || E.cols() != n) throw DimensionError("aip data: E must be q x n");
  if (N.rows() != p || N.cols() != n) throw DimensionError("aip data: N must be p x n");
  if (x.size() != n) throw DimensionError("aip data: x must have n entries");
  require_finite(T, "aip data T");
  require_finite(E, "aip data E");
  require_finite(N, "aip data N");
  require_finite(x, "aip data x");
  if (spectral_radius(T) > 1.0 + tol.rank_tol) throw DomainError("aip data: spectral radius of T exceeds 1");
  AipDataSet d;
  d.S = std::move(S);
  d.T = std::move(T);
  d.E = std::move(E);
  d.N = std::move(N);
  d.x = std::move(x);
  return d;
}

CMatrix obs_gramian(const CMatrix& E, const CMatrix& T, const Tolerances& tol) {
  if (E.cols() != T.rows()) throw DimensionError("obs_gramian: E and T differ in state dimension");
  const double rho = spectral_radius(T);
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "obs_gramian: pair is not output stable (spectral radius " << rho << ")";
    throw IllPosedError(os.str());
  }
  return solve_stein(T, E.adjoint() * E, tol);
}

CMatrix eval_FS(const AipDataSet& data, cplx z) {
  return (data.E - data.S.eval(z) * data.N) * resolvent(data.T, z);
}

CMatrix compute_P_oap(const AipDataSet& data, const Tolerances& tol) {
  if (spectral_radius(data.T) >= 1.0) {
    throw IllPosedError("compute_P_oap: spectral radius of T is 1; supply P from a closed form");
  }
  return solve_stein(data.T, data.E.adjoint() * data.E - data.N.adjoint() * data.N, tol);
}

double stein_residual(const CMatrix& P, const CMatrix& T, const CMatrix& E, const CMatrix& N) {
  return (P - T.adjoint() * P * T - E.adjoint() * E + N.adjoint() * N).norm();
}

Grid membership_grid() {
  Grid g = Grid::polar(5, 8, 0.9);
  return g;
}

namespace {

// Gram matrix of the block kernel over the sample points. The constant
// leading block is shared by all points.
CMatrix sampled_kernel(const CMatrix& lead, const std::vector<CMatrix>& side, const std::vector<CMatrix>& S_vals,
                       const std::vector<cplx>& pts) {
  const Index m = lead.rows();
  const Index q = S_vals.empty() ? 0 : S_vals.front().rows();
  const Index k = static_cast<Index>(pts.size());
  CMatrix G = CMatrix::Zero(m + k * q, m + k * q);
  G.topLeftCorner(m, m) = lead;
  for (Index i = 0; i < k; ++i) {
    G.block(m + i * q, 0, q, m) = side[i];
    G.block(0, m + i * q, m, q) = side[i].adjoint();
    for (Index j = 0; j < k; ++j) {
      G.block(m + i * q, m + j * q, q, q) = kernel_from_values(S_vals[i], S_vals[j], pts[i], pts[j]);
    }
  }
  return G;
}

}  // namespace

AdmissibilityReport check_admissible(const AipDataSet& data, const CMatrix& P, const Tolerances& tol,
                                     const Grid& grid) {
  const Index n = data.state_dim();
  if (P.rows() != n || P.cols() != n) throw DimensionError("check_admissible: P must be n x n");
  AdmissibilityReport r;
  r.P = P;
  r.stein_residual = stein_residual(P, data.T, data.E, data.N);
  const double rhs = (data.E.adjoint() * data.E).norm() + (data.N.adjoint() * data.N).norm();
  r.stein_ok = r.stein_residual <= tol.residual_tol * (1.0 + rhs + P.norm());
  r.obs_pairs_ok = spectral_radius(data.T) <= 1.0 + tol.rank_tol;
  r.psd_ok = psd_check(P, tol).is_psd;
  r.membership_grid = grid.label;

  std::vector<CMatrix> F, Sv;
  try {
    for (const cplx z : grid.points) {
      F.push_back(eval_FS(data, z));
      Sv.push_back(data.S.eval(z));
    }
  } catch (const PoleError&) {
    r.fs_membership_residual = std::numeric_limits<double>::infinity();
    r.fs_membership_ok = false;
    return r;
  }
  const PsdVerdict v = psd_check(sampled_kernel(P, F, Sv, grid.points), tol);
  r.fs_membership_residual = std::max(0.0, -v.min_eigenvalue);
  r.fs_membership_ok = v.is_psd;
  return r;
}

Solvability solvability(const CMatrix& P, const CVector& x, const Tolerances& tol) {
  if (P.rows() != x.size()) throw DimensionError("solvability: P and x differ in size");
  const PsdVerdict v = psd_check(P - x * x.adjoint(), tol);
  Solvability s;
  s.margin = v.min_eigenvalue;
  s.solvable = v.is_psd;
  return s;
}

KernelPositivity kernel_positivity_test(const AipDataSet& data, const CMatrix& P, const MatrixFunction& f,
                                        const std::vector<cplx>& points, const Tolerances& tol) {
  const Index n = data.state_dim();
  CMatrix lead(1 + n, 1 + n);
  lead(0, 0) = 1.0;
  lead.block(0, 1, 1, n) = data.x.adjoint();
  lead.block(1, 0, n, 1) = data.x;
  lead.bottomRightCorner(n, n) = P;
  std::vector<CMatrix> side, Sv;
  for (const cplx z : points) {
    if (!(std::abs(z) < 1.0)) throw DomainError("kernel_positivity_test: points must lie in the open disk");
    const CMatrix fz = f(z);
    if (fz.cols() != 1 || fz.rows() != data.output_dim()) {
      throw DimensionError("kernel_positivity_test: f must return a q x 1 column");
    }
    CMatrix row(data.output_dim(), 1 + n);
    row << fz, eval_FS(data, z);
    side.push_back(row);
    Sv.push_back(data.S.eval(z));
  }
  const PsdVerdict v = psd_check(sampled_kernel(lead, side, Sv, points), tol);
  return {v.is_psd, v.min_eigenvalue};
}

CVector interp_functional(const AipDataSet& data, const Realization& f, const Tolerances& tol) {
  if (f.output_dim() != data.output_dim() || f.input_dim() != 1) {
    throw DimensionError("interp_functional: f must be a q x 1 function");
  }
  if (!f.is_stable()) throw DomainError("interp_functional: realization of f is not stable");
  CVector out = data.E.adjoint() * f.D();
  if (f.state_dim() > 0 && data.state_dim() > 0) {
    const CMatrix Y = solve_sylvester_stein(data.T.adjoint(), f.A(), data.E.adjoint() * f.C(), tol);
    out += data.T.adjoint() * Y * f.B();
  }
  return out;
}

AipDataSet mobius_transform(const AipDataSet& data, cplx w, const Tolerances& tol) {
  if (!(std::abs(w) < 1.0)) throw DomainError("mobius_transform: point must lie in the open disk");
  const Index n = data.state_dim();
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix M = I - w * data.T;
  CMatrix Minv(n, n);
  if (n > 0) {
    Eigen::PartialPivLU<CMatrix> lu(M);
    if (!(lu.rcond() > 1e-13)) throw PoleError("mobius_transform: I - wT is singular", w.real(), w.imag());
    Minv = lu.inverse();
  }
  const double s = std::sqrt(1.0 - std::norm(w));
  SchurFunction St = data.S;
  St.realization = compose_involution(data.S.realization, w);
  AipDataSet out = make_aip_data(St, (std::conj(w) * I - data.T) * Minv, s * data.E * Minv, s * data.N * Minv,
                                 data.x, tol);
  out.P = data.P;
  return out;
}

}  // namespace dbrinterp
