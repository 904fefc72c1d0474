// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "dbrinterp/aipdata.hpp"
#include "dbrinterp/oap.hpp"

namespace testing {

using dbrinterp::cplx;
using dbrinterp::CMatrix;
using dbrinterp::CVector;
using dbrinterp::Index;

using Rng = std::mt19937_64;

inline double max_abs(const CMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

inline cplx random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  return scale * cplx(g(rng), g(rng));
}

inline CMatrix random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0) {
  CMatrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = random_complex(rng, scale);
  }
  return M;
}

inline CVector random_vector(Rng& rng, Index n, double scale = 1.0) { return random_matrix(rng, n, 1, scale).col(0); }

/// Point with modulus uniform in [0, r_max).
inline cplx random_disk_point(Rng& rng, double r_max = 0.9) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r_max * u(rng), 2.0 * M_PI * u(rng));
}

inline std::vector<cplx> random_points(Rng& rng, int count, double r_max = 0.9) {
  std::vector<cplx> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_disk_point(rng, r_max));
  return pts;
}

/// Random matrix with spectral radius rho.
inline CMatrix random_stable(Rng& rng, Index n, double rho) {
  CMatrix T = random_matrix(rng, n, n);
  return T * (rho / dbrinterp::spectral_radius(T));
}

/// Schur function q x p from a strictly contractive colligation.
inline dbrinterp::SchurFunction random_schur(Rng& rng, Index state, Index p, Index q, double norm = 0.9) {
  CMatrix U = random_matrix(rng, state + q, state + p);
  U *= norm / dbrinterp::operator_norm(U);
  dbrinterp::Realization R(U.topLeftCorner(state, state), U.topRightCorner(state, p), U.bottomLeftCorner(q, state),
                           U.bottomRightCorner(q, p));
  return dbrinterp::certify_schur(R);
}

/// Admissible data {S, T, E, build_N, x} with x*P^+x = target_norm^2.
inline dbrinterp::AipDataSet random_admissible(Rng& rng, Index n, Index p, Index q, double target_norm = 0.7) {
  std::uniform_int_distribution<int> sd(0, 2);
  const dbrinterp::SchurFunction S = random_schur(rng, sd(rng), p, q);
  const CMatrix T = random_stable(rng, n, 0.8);
  const CMatrix E = random_matrix(rng, q, n);
  dbrinterp::AipDataSet data = dbrinterp::oap_to_aip(S, E, T, CVector::Zero(n));
  const CMatrix& P = *data.P;
  const CVector c = random_vector(rng, n);
  const double energy = std::real(c.dot(P * c));
  data.x = P * c * (target_norm / std::sqrt(energy));
  return data;
}

}  // namespace testing
