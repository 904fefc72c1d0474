// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/homint.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "dbrinterp/oap.hpp"

namespace dbrinterp {

namespace {

CMatrix block_gram(const std::vector<cplx>& pts, Index q, const std::function<CMatrix(Index, Index)>& block) {
  const Index m = static_cast<Index>(pts.size());
  CMatrix K(m * q, m * q);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) K.block(i * q, j * q, q, q) = block(i, j);
  }
  return (K + K.adjoint()) / 2.0;
}

}  // namespace

ModelSpace model_space(const SchurFunction& B, const Tolerances& tol) {
  if (B.input_dim() != 1 || B.output_dim() != 1) throw DimensionError("model_space: B must be scalar");
  if (!B.certified_inner) throw DomainError("model_space: B is not certified inner");
  const Realization& R = B.realization;
  const Index d = R.state_dim();
  ModelSpace ms;
  ms.T = CMatrix(d, d);
  ms.E = CMatrix(1, d);
  if (d == 0) return ms;
  if (!R.is_stable()) throw DomainError("model_space: B has poles in the closed disk");
  const CMatrix G = realization_obs_gramian(R, tol);
  const PsdVerdict pv = psd_check(G, tol);
  if (pv.min_eigenvalue < tol.psd_tol) throw PreconditionError("model_space: realization of B is not observable");
  const CMatrix root = sqrt_psd(G, tol);
  const CMatrix root_inv = root.inverse();
  const CMatrix T0 = root * R.A() * root_inv;
  const CMatrix E0 = R.C() * root_inv;

  // Triangular form gives the nested Takenaka-Malmquist basis.
  const Eigen::ComplexSchur<CMatrix> schur(T0);
  CMatrix Q = schur.matrixU();
  CMatrix T = Q.adjoint() * T0 * Q;
  CMatrix E = E0 * Q;
  // Phase convention: first nonzero Taylor coefficient of each basis function is positive.
  for (Index k = 0; k < d; ++k) {
    CVector v = CVector::Unit(d, k);
    cplx c = 0.0;
    for (Index n = 0; n <= d; ++n) {
      c = (E * v)(0);
      if (std::abs(c) > std::sqrt(tol.rank_tol)) break;
      v = T * v;
    }
    if (std::abs(c) == 0.0) continue;
    const cplx w = std::conj(c) / std::abs(c);
    Q.col(k) *= w;
  }
  ms.T = Q.adjoint() * T0 * Q;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < i; ++j) ms.T(i, j) = 0.0;
  }
  ms.E = E0 * Q;
  for (Index k = 0; k < d; ++k) {
    const CVector e = CVector::Unit(d, k);
    ms.basis.emplace_back(ms.T, ms.T * e, ms.E, ms.E * e);
  }
  return ms;
}

std::vector<cplx> intersection_samples() { return Grid::polar(3, 6, 0.75).points; }

IntersectionSpace intersection_space(const SchurFunction& S, const SchurFunction& B, const Tolerances& tol) {
  const ModelSpace ms = model_space(B, tol);
  if (ms.T.rows() == 0) throw DomainError("intersection_space: B must have positive degree");
  const Index q = S.output_dim();
  const CMatrix Iq = CMatrix::Identity(q, q);

  IntersectionSpace out;
  out.T = kron(ms.T, Iq);
  out.E = kron(ms.E, Iq);
  out.N = build_N(S, out.E, out.T, tol);
  const Index n = out.T.rows();
  out.P = solve_stein(out.T, out.E.adjoint() * out.E - out.N.adjoint() * out.N, tol);

  auto data = std::make_shared<AipDataSet>(make_aip_data(S, out.T, out.E, out.N, CVector::Zero(n), tol));
  data->P = out.P;
  auto col = std::make_shared<RedhefferColligation>(build_colligation(out.P, out.T, out.E, out.N, tol));
  out.colligation = *col;
  const CMatrix P_plus =
      col->X0_basis * col->sqrt_eigs.cwiseAbs2().cwiseInverse().cast<cplx>().asDiagonal() * col->X0_basis.adjoint();

  out.samples = intersection_samples();
  const MatrixFunction Sf = S.realization.as_function();
  out.parameter = recover_parameter(*col, Sf, out.samples, tol);

  out.G = [col, Sf, tol](cplx z) {
    const RecoveredParameter rp = recover_parameter(*col, Sf, {z}, tol);
    return compute_G_Gamma(*col, rp.values.front(), z).G;
  };
  out.kernel = [data, P_plus](cplx z, cplx zeta) {
    return CMatrix(kernel_KS(data->S.realization, z, zeta) - eval_FS(*data, z) * P_plus * eval_FS(*data, zeta).adjoint());
  };
  // K(., zeta) y = [I, -S] g with g = [k_zeta y - E (I - zT)^{-1} u; k_zeta w - N (I - zT)^{-1} u],
  // w = S(zeta)^* y and u = P^+ F(zeta)^* y, so both terms share one state space.
  const Realization row = hstack(Realization::constant(Iq), cplx(-1.0) * S.realization);
  out.element = [data, P_plus, row](cplx zeta, const CVector& y) {
    const Index nn = data->T.rows();
    const Index qq = data->E.rows();
    const Index pp = data->N.rows();
    const CVector w = data->S.realization.eval(zeta).adjoint() * y;
    const CVector u = P_plus * eval_FS(*data, zeta).adjoint() * y;
    CMatrix A = CMatrix::Zero(1 + nn, 1 + nn);
    A(0, 0) = std::conj(zeta);
    A.bottomRightCorner(nn, nn) = data->T;
    CMatrix Bg(1 + nn, 1);
    Bg(0, 0) = std::conj(zeta);
    Bg.bottomRows(nn) = data->T * u;
    CMatrix C(qq + pp, 1 + nn);
    C.block(0, 0, qq, 1) = y;
    C.block(qq, 0, pp, 1) = w;
    C.block(0, 1, qq, nn) = -data->E;
    C.block(qq, 1, pp, nn) = -data->N;
    CMatrix D(qq + pp, 1);
    D.topRows(qq) = y - data->E * u;
    D.bottomRows(pp) = w - data->N * u;
    return row * Realization(A, Bg, C, D);
  };

  const std::vector<cplx>& pts = out.samples;
  const Index m = static_cast<Index>(pts.size());
  std::vector<CMatrix> Gs;
  for (Index i = 0; i < m; ++i) Gs.push_back(compute_G_Gamma(*col, out.parameter.values[i], pts[i]).G);

  const CMatrix Km = block_gram(pts, q, [&](Index i, Index j) { return out.kernel(pts[i], pts[j]); });
  const CMatrix Ks = block_gram(pts, q, [&](Index i, Index j) { return kernel_KS(S.realization, pts[i], pts[j]); });
  const CMatrix Kg = block_gram(pts, q, [&](Index i, Index j) {
    const CMatrix Ke = kernel_from_values(out.parameter.values[i], out.parameter.values[j], pts[i], pts[j]);
    return CMatrix(Gs[i] * Ke * Gs[j].adjoint());
  });
  const Index ds = col->dims.delta_star;
  const CMatrix Ke = block_gram(pts, ds, [&](Index i, Index j) {
    return kernel_from_values(out.parameter.values[i], out.parameter.values[j], pts[i], pts[j]);
  });
  out.kernel_identity_residual = (Kg - Km).cwiseAbs().maxCoeff();

  const double scale = operator_norm(Ks);
  out.image_dim = numerical_rank(Km, tol, scale);
  out.parameter_space_dim = ds > 0 ? numerical_rank(Ke, tol, 1.0) : 0;
  // Saturation: the rank keeps growing when the second half of the samples is added.
  const Index half = (m / 2) * q;
  out.dimension_saturated = numerical_rank(Km.topLeftCorner(half, half), tol, scale) < out.image_dim;

  std::vector<Realization> elems;
  for (Index i = 0; i < m; ++i) {
    const CVector y = CVector::Unit(q, i % q);
    elems.push_back(out.element(pts[i], y));
    const Realization& h = elems.back();
    out.max_membership_residual = std::max(out.max_membership_residual, interp_functional(*data, h, tol).norm());

    // [[||h||^2, h(z_j)^*], [h(z_i), K_S(z_i, z_j)]] must be PSD for h in H(K_S).
    CMatrix M(1 + m * q, 1 + m * q);
    M(0, 0) = y.dot(out.kernel(pts[i], pts[i]) * y);
    for (Index j = 0; j < m; ++j) {
      const CVector hz = h.eval(pts[j]);
      M.block(1 + j * q, 0, q, 1) = hz;
      M.block(0, 1 + j * q, 1, q) = hz.adjoint();
    }
    M.bottomRightCorner(m * q, m * q) = Ks;
    const PsdVerdict v = psd_check(M, tol);
    out.max_ks_residual = std::max(out.max_ks_residual, std::max(0.0, -v.min_eigenvalue) / (1.0 + scale));
  }

  if (S.certified_inner) {
    // Every third sample, so all radii take part.
    double defect = 0.0;
    for (Index i = 0; i < m; i += 3) {
      for (Index j = 0; j < m; j += 3) {
        const cplx h2 = h2_inner_product(elems[j], elems[i], tol);
        const cplx rk = Kg(i * q + i % q, j * q + j % q);
        defect = std::max(defect, std::abs(h2 - rk));
      }
    }
    out.isometry_defect = defect;
  }
  return out;
}

}  // namespace dbrinterp
