// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file homint.hpp
///
/// Model spaces K_B = H^2 (-) B H^2 of finite Blaschke products and the
/// intersection M_{S,B} = K_S cap B H^2 described through the colligation
/// of the homogeneous problem with data {S, T, E, N, x = 0} on K_B.
///

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dbrinterp/redheffer.hpp"

namespace dbrinterp {

struct ModelSpace {
  std::vector<Realization> basis;  ///< orthonormal basis of K_B
  CMatrix T;                       ///< backward shift h -> (h - h(0))/z in that basis
  CMatrix E;                       ///< evaluation h -> h(0)
};

/// Requires a certified-inner scalar B whose realization is minimal.
ModelSpace model_space(const SchurFunction& B, const Tolerances& tol = {});

struct IntersectionSpace {
  CMatrix T, E, N, P;
  RedhefferColligation colligation;
  RecoveredParameter parameter;      ///< E recovered on the sample points
  Index parameter_space_dim = 0;     ///< sampled rank of K_E
  Index image_dim = 0;               ///< sampled rank of the kernel of M_{S,B}
  bool dimension_saturated = false;  ///< sampled rank hit the number of samples (likely infinite)
  double kernel_identity_residual = 0.0;  ///< G K_E G^* against K_S - F P^+ F^* on the samples
  double max_membership_residual = 0.0;   ///< projection onto K_B (x) C^q of sampled elements
  double max_ks_residual = 0.0;           ///< negative part of the kernel Gram test in H(K_S)
  std::optional<double> isometry_defect;  ///< H^2 Gram vs H(K_E) Gram of sampled elements (S inner)
  std::vector<cplx> samples;
  std::function<CMatrix(cplx)> G;         ///< G(z), recovering E(z) on demand

  /// Reproducing kernel K_S(z, zeta) - F(z) P^+ F(zeta)^* of M_{S,B}.
  std::function<CMatrix(cplx, cplx)> kernel;
  /// The element K(., zeta) y as an exact realization.
  std::function<Realization(cplx, const CVector&)> element;
};

/// Sample points used for recovery, ranks and identity checks.
std::vector<cplx> intersection_samples();

/// Throws RecoveryError when S is not reached by the Redheffer transform.
IntersectionSpace intersection_space(const SchurFunction& S, const SchurFunction& B, const Tolerances& tol = {});

}  // namespace dbrinterp
