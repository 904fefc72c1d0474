// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dbrinterp {

namespace {

double binom(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (Index i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

/// z^k by repeated multiplication, so that 0^0 = 1.
cplx ipow(cplx z, Index k) {
  cplx r = 1.0;
  for (Index i = 0; i < k; ++i) r *= z;
  return r;
}

/// Psi_{j,l} = (-1)^l binom(l, j) t^{l+j+1} for j <= l.
CMatrix psi_matrix(cplx t, Index n) {
  CMatrix Psi = CMatrix::Zero(n + 1, n + 1);
  for (Index j = 0; j <= n; ++j) {
    for (Index l = j; l <= n; ++l) {
      Psi(j, l) = (l % 2 == 0 ? 1.0 : -1.0) * binom(l, j) * ipow(t, l + j + 1);
    }
  }
  return Psi;
}

/// Upper triangular Toeplitz matrix with first row conj(s_0), ..., conj(s_n).
CMatrix conj_toeplitz(const std::vector<cplx>& s, Index n) {
  CMatrix U = CMatrix::Zero(n + 1, n + 1);
  for (Index a = 0; a <= n; ++a) {
    for (Index b = a; b <= n; ++b) U(a, b) = std::conj(s[b - a]);
  }
  return U;
}

std::vector<Index> block_offsets(const BoundaryDataSet& bd) {
  std::vector<Index> off{0};
  for (const Index n : bd.orders) off.push_back(off.back() + n + 1);
  return off;
}

/// Neville extrapolation of values sampled at h_k to h = 0.
cplx neville_at_zero(const std::vector<double>& h, std::vector<cplx> v) {
  const std::size_t m = h.size();
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = 0; i + k < m; ++i) {
      v[i] = (h[i + k] * v[i] - h[i] * v[i + 1]) / (h[i + k] - h[i]);
    }
  }
  return v.front();
}

}  // namespace

Index BoundaryDataSet::total_conditions() const {
  Index n = 0;
  for (const Index k : orders) n += k + 1;
  return n;
}

BoundaryDataSet make_boundary_data(SchurFunction s, std::vector<double> angles, std::vector<Index> orders,
                                   std::vector<std::vector<cplx>> targets, const Tolerances& tol) {
  if (s.input_dim() != 1 || s.output_dim() != 1) throw DimensionError("boundary data: s must be scalar");
  if (!s.certified_inner) throw DomainError("boundary data: s must be a certified inner function");
  if (angles.size() != orders.size() || angles.size() != targets.size()) {
    throw DimensionError("boundary data: angles, orders and targets differ in length");
  }
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!std::isfinite(angles[i])) throw DomainError("boundary data: angle is not finite");
    if (orders[i] < 0) throw DomainError("boundary data: orders must be nonnegative");
    if (static_cast<Index>(targets[i].size()) != orders[i] + 1) {
      throw DimensionError("boundary data: node " + std::to_string(i) + " needs order + 1 targets");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(std::polar(1.0, angles[i]) - std::polar(1.0, angles[j])) < std::sqrt(tol.rank_tol)) {
        throw DomainError("boundary data: nodes must be distinct");
      }
    }
  }
  BoundaryDataSet bd{std::move(s), std::move(angles), std::move(orders), std::move(targets)};
  return bd;
}

std::vector<cplx> boundary_taylor(const SchurFunction& s, cplx t, Index m) {
  const std::vector<CMatrix> c = s.realization.taylor_at(t, m + 1);
  std::vector<cplx> out;
  for (const CMatrix& x : c) out.push_back(x(0, 0));
  return out;
}

cplx boundary_kernel(const SchurFunction& s, cplx t, Index j, cplx z) {
  const std::vector<cplx> sj = boundary_taylor(s, t, j);
  const cplx d = 1.0 - z * std::conj(t);
  cplx acc = 0.0;
  for (Index l = 0; l <= j; ++l) {
    acc += ipow(z, j - l) * std::conj(sj[l]) / ipow(d, j + 1 - l);
  }
  return ipow(z, j) / ipow(d, j + 1) - s.eval(z)(0, 0) * acc;
}

BoundaryMatrices build_boundary_data(const BoundaryDataSet& bd) {
  const Index n = bd.total_conditions();
  const std::vector<Index> off = block_offsets(bd);
  BoundaryMatrices m;
  m.T = CMatrix::Zero(n, n);
  m.E = CMatrix::Zero(1, n);
  m.N = CMatrix::Zero(1, n);
  m.x = CVector::Zero(n);
  for (std::size_t i = 0; i < bd.angles.size(); ++i) {
    const cplx t = bd.node(i);
    const Index ni = bd.orders[i];
    const Index o = off[i];
    const std::vector<cplx> s = boundary_taylor(bd.s, t, ni);
    for (Index j = 0; j <= ni; ++j) {
      m.T(o + j, o + j) = std::conj(t);
      if (j < ni) m.T(o + j, o + j + 1) = 1.0;
      m.N(0, o + j) = std::conj(s[j]);
      m.x(o + j) = bd.targets[i][j];
    }
    m.E(0, o) = 1.0;
  }
  return m;
}

CMatrix compute_P_boundary(const BoundaryDataSet& bd, const Tolerances& tol) {
  const std::size_t k = bd.angles.size();
  const std::vector<Index> off = block_offsets(bd);
  std::vector<std::vector<cplx>> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = boundary_taylor(bd.s, bd.node(i), 2 * bd.orders[i] + 1);

  CMatrix P = CMatrix::Zero(off.back(), off.back());
  for (std::size_t i = 0; i < k; ++i) {
    const Index ni = bd.orders[i];
    const cplx ti = bd.node(i);
    for (std::size_t j = 0; j < k; ++j) {
      const Index nj = bd.orders[j];
      const cplx tj = bd.node(j);
      CMatrix H(ni + 1, nj + 1);
      if (i == j) {
        for (Index l = 0; l <= ni; ++l) {
          for (Index r = 0; r <= nj; ++r) H(l, r) = s[i][l + r + 1];
        }
      } else {
        const cplx d = ti - tj;
        for (Index r = 0; r <= ni; ++r) {
          for (Index m = 0; m <= nj; ++m) {
            cplx h = 0.0;
            for (Index l = 0; l <= r; ++l) {
              h += ((r - l) % 2 == 0 ? 1.0 : -1.0) * binom(m + r - l, m) * s[i][l] /
                   ipow(d, m + r - l + 1);
            }
            for (Index l = 0; l <= m; ++l) {
              h -= (r % 2 == 0 ? 1.0 : -1.0) * binom(m + r - l, r) * s[j][l] /
                   ipow(d, m + r - l + 1);
            }
            H(r, m) = h;
          }
        }
      }
      P.block(off[i], off[j], ni + 1, nj + 1) = H * psi_matrix(tj, nj) * conj_toeplitz(s[j], nj);
    }
  }
  const double asym = (P - P.adjoint()).norm();
  if (!(asym <= tol.residual_tol * (1.0 + P.norm()))) {
    std::ostringstream os;
    os.precision(17);
    os << "compute_P_boundary: closed form is not Hermitian (defect " << asym
       << "), the Caratheodory-Julia conditions fail";
    throw DomainError(os.str());
  }
  return (P + P.adjoint()) / 2.0;
}

CMatrix boundary_gram_oracle(const BoundaryDataSet& bd, const Tolerances& tol) {
  const Realization& R = bd.s.realization;
  const Index d = R.state_dim();
  const std::vector<Index> off = block_offsets(bd);
  CMatrix V = CMatrix::Zero(d, off.back());
  const CMatrix Astar = R.A().adjoint();
  for (std::size_t i = 0; i < bd.angles.size(); ++i) {
    const CMatrix M = resolvent(Astar, std::conj(bd.node(i)));
    const CMatrix step = Astar * M;
    CMatrix v = M * R.C().adjoint();
    for (Index j = 0; j <= bd.orders[i]; ++j) {
      V.col(off[i] + j) = v;
      v = step * v;
    }
  }
  const CMatrix G = realization_obs_gramian(R, tol);
  const CMatrix P = V.adjoint() * Eigen::LLT<CMatrix>(G).solve(V);
  return (P + P.adjoint()) / 2.0;
}

double fs_kernel_residual(const BoundaryDataSet& bd, const std::vector<cplx>& points) {
  const BoundaryMatrices m = build_boundary_data(bd);
  const std::vector<Index> off = block_offsets(bd);
  double worst = 0.0;
  for (const cplx z : points) {
    const CMatrix F = (m.E - bd.s.eval(z)(0, 0) * m.N) * resolvent(m.T, z);
    for (std::size_t i = 0; i < bd.angles.size(); ++i) {
      for (Index j = 0; j <= bd.orders[i]; ++j) {
        worst = std::max(worst, std::abs(F(0, off[i] + j) - boundary_kernel(bd.s, bd.node(i), j, z)));
      }
    }
  }
  return worst;
}

std::vector<RadialRow> radial_check(const BoundaryDataSet& bd, const Realization& f) {
  std::vector<double> h;
  for (int m = 4; m <= 12; ++m) h.push_back(std::ldexp(1.0, -m));
  std::vector<RadialRow> rows;
  for (std::size_t i = 0; i < bd.angles.size(); ++i) {
    const cplx t = bd.node(i);
    const Index ni = bd.orders[i];
    std::vector<std::vector<cplx>> samples(ni + 1);
    for (const double hk : h) {
      const std::vector<CMatrix> c = f.taylor_at((1.0 - hk) * t, ni + 1);
      for (Index j = 0; j <= ni; ++j) samples[j].push_back(c[j](0, 0));
    }
    for (Index j = 0; j <= ni; ++j) {
      RadialRow row;
      row.node = static_cast<Index>(i);
      row.order = j;
      row.target = bd.targets[i][j];
      row.extrapolated = neville_at_zero(h, samples[j]);
      row.last_sample = samples[j].back();
      row.error = std::abs(row.extrapolated - row.target);
      rows.push_back(row);
    }
  }
  return rows;
}

BoundarySolution solve_boundary(const BoundaryDataSet& bd, const Tolerances& tol) {
  const BoundaryMatrices m = build_boundary_data(bd);
  BoundarySolution out;
  out.P = compute_P_boundary(bd, tol);
  out.data = make_aip_data(bd.s, m.T, m.E, m.N, m.x, tol);
  out.data.P = out.P;
  out.stein_residual = stein_residual(out.P, m.T, m.E, m.N);
  const double scale = 1.0 + out.P.norm() + m.E.norm() * m.E.norm() + m.N.norm() * m.N.norm();
  if (!(out.stein_residual <= tol.residual_tol * scale)) {
    throw InconsistencyError("solve_boundary: injected P fails the Stein identity", out.stein_residual);
  }
  const Solvability sv = solvability(out.P, m.x, tol);
  out.margin = sv.margin;
  if (!sv.solvable) {
    std::ostringstream os;
    os.precision(17);
    os << "solve_boundary: P - xx^* is not PSD, margin " << sv.margin;
    throw UnsolvableError(os.str(), sv.margin);
  }

  out.colligation = build_colligation(out.P, m.T, m.E, m.N, tol);
  const RedhefferColligation& col = out.colligation;
  const TargetLift lift = lift_target(col, m.x, tol);
  if (!lift.in_range) throw UnsolvableError("solve_boundary: x is not in the range of P^{1/2}", -lift.residual);
  out.x_tilde = lift.x_tilde;
  const double xn = lift.x_tilde.norm();
  out.budget = std::sqrt(std::max(0.0, 1.0 - xn * xn));
  const UniquenessVerdict uv = classify_uniqueness(col, xn, nullptr, tol);
  out.uniqueness = uv.uniqueness;
  out.case_tag = uv.case_tag;

  // F^s(z) = C (I - zA)^{-1} G^{-1} V over the state space of s.
  const Realization& R = bd.s.realization;
  const CMatrix Astar = R.A().adjoint();
  const std::vector<Index> off = block_offsets(bd);
  CMatrix V = CMatrix::Zero(R.state_dim(), off.back());
  for (std::size_t i = 0; i < bd.angles.size(); ++i) {
    const CMatrix M = resolvent(Astar, std::conj(bd.node(i)));
    CMatrix v = M * R.C().adjoint();
    for (Index j = 0; j <= bd.orders[i]; ++j) {
      V.col(off[i] + j) = v;
      v = Astar * M * v;
    }
  }
  const CMatrix G = realization_obs_gramian(R, tol);
  const CMatrix P_plus =
      col.X0_basis * col.sqrt_eigs.cwiseAbs2().cwiseInverse().cast<cplx>().asDiagonal() * col.X0_basis.adjoint();
  const CVector c = Eigen::LLT<CMatrix>(G).solve(V * (P_plus * m.x));
  out.f_min = Realization(R.A(), R.A() * c, R.C(), R.C() * c);

  const std::vector<cplx> pts = Grid::polar(2, 6, 0.7).points;
  try {
    const RecoveredParameter rp = recover_parameter(col, R.as_function(), pts, tol);
    out.recovered = true;
    out.recovery_residual = rp.max_residual;
    double g = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const CMatrix gamma = compute_G_Gamma(col, rp.values[i], pts[i]).Gamma;
      g = std::max(g, (gamma * out.x_tilde - out.f_min.eval(pts[i])).norm());
    }
    out.gamma_residual = g;
    // H(K_E) is trivial when K_E vanishes on the recovery points.
    if (out.uniqueness == Uniqueness::non_unique) {
      double k = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        k = std::max(k, kernel_from_values(rp.values[i], rp.values[i], pts[i], pts[i]).norm());
      }
      if (k <= tol.psd_tol) out.uniqueness = Uniqueness::unique_by_dense_range;
    }
  } catch (const RecoveryError& e) {
    out.recovery_residual = e.residual();
  }

  out.radial = radial_check(bd, out.f_min);
  for (const RadialRow& r : out.radial) out.max_radial_error = std::max(out.max_radial_error, r.error);
  return out;
}

}  // namespace dbrinterp
