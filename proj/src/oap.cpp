// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/oap.hpp"

#include <cmath>
#include <sstream>

namespace dbrinterp {

CMatrix build_N(const SchurFunction& S, const CMatrix& E, const CMatrix& T, const Tolerances& tol) {
  const Realization& s = S.realization;
  if (E.rows() != s.output_dim() || E.cols() != T.rows()) throw DimensionError("build_N: E, T and S do not fit");
  if (spectral_radius(T) >= 1.0) throw IllPosedError("build_N: spectral radius of T must be below 1");
  CMatrix N = s.D().adjoint() * E;
  if (s.state_dim() > 0 && T.rows() > 0) {
    const CMatrix X = solve_sylvester_stein(s.A().adjoint(), T, s.C().adjoint() * E, tol);
    N += s.B().adjoint() * X * T;
  }
  return N;
}

AipDataSet oap_to_aip(const SchurFunction& S, const CMatrix& E, const CMatrix& T, const CVector& x,
                      const Tolerances& tol) {
  if (spectral_radius(T) >= 1.0) throw IllPosedError("oap_to_aip: (E, T) is not output stable");
  AipDataSet d = make_aip_data(S, T, E, build_N(S, E, T, tol), x, tol);
  d.P = compute_P_oap(d, tol);
  return d;
}

H2Solution h2_solve(const CMatrix& E, const CMatrix& T, const CVector& x, const Tolerances& tol) {
  const Index n = T.rows();
  const Index q = E.rows();
  if (x.size() != n) throw DimensionError("h2_solve: x must have n entries");
  H2Solution s;
  s.P = obs_gramian(E, T, tol);
  const PsdVerdict pv = psd_check(s.P, tol);
  if (n > 0 && pv.min_eigenvalue < tol.psd_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "h2_solve: Gram matrix is singular (min eigenvalue " << pv.min_eigenvalue << ")";
    throw PreconditionError(os.str());
  }
  const Solvability sv = solvability(s.P, x, tol);
  s.margin = n ? sv.margin : 1.0;
  if (!sv.solvable) throw UnsolvableError("h2_solve: P - xx^* is not PSD", sv.margin);

  const CMatrix root = sqrt_psd(s.P, tol);
  const CMatrix root_inv = n ? CMatrix(root.inverse()) : CMatrix(0, 0);
  const CMatrix P_inv = root_inv * root_inv;
  const CVector y = P_inv * x;
  s.budget = std::sqrt(std::max(0.0, 1.0 - x.dot(y).real()));
  s.f_min = Realization(T, T * y, E, E * y);

  CMatrix V(n + q, n);
  V.topRows(n) = root * T * root_inv;
  V.bottomRows(q) = E * root_inv;
  const CMatrix U = unitary_completion(V, tol);
  const Realization B(V.topRows(n), U.topRightCorner(n, q), V.bottomRows(q), U.bottomRightCorner(q, q));
  s.B = certify_schur(B, Grid::polar(), Grid::circle(), tol);
  return s;
}

double inner_kernel_residual(const H2Solution& s, const CMatrix& E, const CMatrix& T, cplx z, cplx zeta) {
  const CMatrix lhs = kernel_KS(s.B.realization, z, zeta);
  const CMatrix P_inv = s.P.inverse();
  const CMatrix rhs = E * resolvent(T, z) * P_inv * resolvent(T, zeta).adjoint() * E.adjoint();
  return (lhs - rhs).norm();
}

InterpData np_data(const std::vector<cplx>& nodes, const std::vector<cplx>& targets) {
  if (nodes.size() != targets.size()) throw DimensionError("np_data: nodes and targets differ in length");
  const Index n = static_cast<Index>(nodes.size());
  for (Index i = 0; i < n; ++i) {
    if (!(std::abs(nodes[i]) < 1.0)) throw DomainError("np_data: nodes must lie in the open disk");
    for (Index j = 0; j < i; ++j) {
      if (std::abs(nodes[i] - nodes[j]) < 1e-12) throw DomainError("np_data: repeated node, use the cf form");
    }
  }
  InterpData d;
  d.T = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d.T(i, i) = std::conj(nodes[i]);
  d.E = CMatrix::Ones(1, n);
  d.x = Eigen::Map<const CVector>(targets.data(), n);
  return d;
}

InterpData cf_data(cplx w, const std::vector<cplx>& taylor_targets) {
  if (!(std::abs(w) < 1.0)) throw DomainError("cf_data: point must lie in the open disk");
  const Index m = static_cast<Index>(taylor_targets.size());
  InterpData d;
  d.T = std::conj(w) * CMatrix::Identity(m, m);
  for (Index i = 0; i + 1 < m; ++i) d.T(i, i + 1) = 1.0;
  d.E = CMatrix::Zero(1, m);
  if (m > 0) d.E(0, 0) = 1.0;
  d.x = Eigen::Map<const CVector>(taylor_targets.data(), m);
  return d;
}

}  // namespace dbrinterp
