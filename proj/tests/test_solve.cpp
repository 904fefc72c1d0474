// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "dbrinterp/oap.hpp"
#include "dbrinterp/solve.hpp"
#include "support.hpp"

using namespace dbrinterp;
using testing::max_abs;

namespace {

CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

AipDataSet szego(double x = 1.0) {
  AipDataSet d = make_aip_data(certify_schur(Realization::constant(scalar(0.0))), scalar(0.5), scalar(1.0),
                               scalar(0.0), CVector::Constant(1, x));
  d.P = compute_P_oap(d);
  return d;
}

cplx f_szego(cplx z) { return 0.75 / (1.0 - z / 2.0); }

}  // namespace

TEST_SUITE("solve") {
  TEST_CASE("douglas_solve with A = I") {
    testing::Rng rng(1);
    CMatrix B = testing::random_matrix(rng, 2, 2);
    B *= 0.8 / operator_norm(B);
    const DouglasParametrization dp = douglas_factor(CMatrix::Identity(2, 2), B);
    CHECK(dp.unique);
    CHECK(max_abs(dp.minimal() - B) < 1e-14);
  }

  TEST_CASE("douglas_solve with A = [1, 0] sweeps X = [0; k]") {
    CMatrix A(1, 2);
    A << 1.0, 0.0;
    const CMatrix B = CMatrix::Zero(1, 1);
    const DouglasParametrization dp = douglas_factor(A, B);
    CHECK_FALSE(dp.unique);
    for (const cplx k : {cplx(0.0), cplx(0.5, 0.5), cplx(-1.0)}) {
      CMatrix K(2, 1);
      K << 0.0, k;
      const CMatrix X = dp.solve(K);
      CHECK(std::abs(X(0, 0)) < 1e-15);
      CHECK(std::abs(X(1, 0) - k) < 1e-15);
    }
  }

  TEST_CASE("douglas_solve degenerate and unsolvable cases") {
    const CMatrix X = douglas_solve(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2));
    CHECK(max_abs(X) == 0.0);
    CHECK_THROWS_AS(douglas_factor(scalar(1.0), scalar(2.0)), UnsolvableError);
    CHECK_THROWS_AS(douglas_solve(scalar(1.0), scalar(0.5), scalar(3.0)), DomainError);
  }

  TEST_CASE("douglas_solve property: AX = B and contractivity") {
    testing::Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      const Index m = 1 + trial % 4, a = 1 + trial % 5, b = 1 + trial % 3;
      const CMatrix A = testing::random_matrix(rng, m, a);
      CMatrix C = testing::random_matrix(rng, a, b);
      C *= 0.9 / operator_norm(C);
      const CMatrix B = A * C;
      CMatrix K = testing::random_matrix(rng, a, b);
      K /= operator_norm(K);
      const CMatrix X = douglas_solve(A, B, K);
      CHECK(max_abs(A * X - B) < 1e-9);
      CHECK(operator_norm(X) <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("solve_inverse_route on the Szego instance") {
    const AipDataSet d = szego();
    const InverseRouteSolution s = solve_inverse_route(d, *d.P);
    CHECK(std::abs(s.budget - 0.5) < 1e-15);
    CHECK(std::abs(s.x_tilde_norm - std::sqrt(0.75)) < 1e-15);
    for (const cplx z : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.7, 0.1)}) {
      CHECK(std::abs(s.f_min.eval(z)(0, 0) - f_szego(z)) < 1e-14);
      const cplx expected = 1.0 / (1.0 - std::norm(z)) - 0.75 / std::norm(1.0 - z / 2.0);
      CHECK(std::abs(s.ktilde(z, z)(0, 0) - expected) < 1e-13);
    }
    const std::vector<cplx> pts = Grid::polar(3, 6, 0.9).points;
    CMatrix K(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) K(i, j) = s.ktilde(pts[i], pts[j])(0, 0);
    }
    CHECK(psd_check(K).is_psd);
  }

  TEST_CASE("solve_inverse_route with x = 0 and error cases") {
    const AipDataSet d = szego(0.0);
    const InverseRouteSolution s = solve_inverse_route(d, *d.P);
    CHECK(s.budget == doctest::Approx(1.0));
    CHECK(std::abs(s.f_min.eval(0.4)(0, 0)) == 0.0);
    CHECK_THROWS_AS(solve_inverse_route(szego(2.0), scalar(4.0 / 3.0)), UnsolvableError);
    CHECK_THROWS_AS(solve_inverse_route(d, scalar(0.0)), PreconditionError);
  }

  TEST_CASE("aip_solve central solution matches the inverse route") {
    const AipDataSet d = szego();
    const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
    const SchurFunction zero = uncertified(zero_parameter(col));
    const SolutionFamily fam = aip_solve(d, col, zero);
    CHECK(std::abs(fam.budget - 0.5) < 1e-14);
    CHECK(std::abs(fam.x_tilde.norm() - std::sqrt(0.75)) < 1e-14);
    testing::Rng rng(3);
    for (const cplx z : testing::random_points(rng, 20)) CHECK(std::abs(fam.f.eval(z)(0, 0) - f_szego(z)) < 1e-9);
    CHECK(std::abs(h2_norm(fam.f) * h2_norm(fam.f) - 0.75) < 1e-12);
  }

  TEST_CASE("aip_solve property: interpolation and norm budget") {
    testing::Rng rng(4);
    for (int trial = 0; trial < 8; ++trial) {
      const AipDataSet d = testing::random_admissible(rng, 1 + trial % 4, 1, 1 + trial % 2, 0.6);
      const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
      const SchurFunction param = testing::random_schur(rng, 1, col.dims.delta, col.dims.delta_star, 0.5);
      // The family solves the problem for S = R[param] with the same T, E, N and P.
      AipDataSet dp = d;
      dp.S = certify_schur(redheffer_realization(col, param.realization));
      const SolutionFamily central = aip_solve(dp, col, param);
      CHECK(std::abs(central.budget * central.budget + central.x_tilde.squaredNorm() - 1.0) < 1e-9);
      const auto pts = testing::random_points(rng, 6);
      CHECK(kernel_positivity_test(dp, *d.P, central.f.as_function(), pts).psd);
      const InverseRouteSolution inv = solve_inverse_route(dp, *d.P);
      for (const cplx z : pts) CHECK(max_abs(inv.f_min.eval(z) - central.f.eval(z)) < 1e-8);
    }
  }

  TEST_CASE("aip_solve with x = 0 gives G h") {
    const AipDataSet d = szego(0.0);
    const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
    const SchurFunction zero = uncertified(zero_parameter(col));
    const Realization h = Realization::constant(CMatrix::Constant(col.dims.delta_star, 1, 0.3));
    const SolutionFamily fam = aip_solve(d, col, zero, &h);
    CHECK(std::abs(fam.f_min.eval(0.2)(0, 0)) < 1e-15);
    const cplx z(0.1, 0.5);
    CHECK(std::abs(fam.f.eval(z)(0, 0) - (fam.g_mult(col, z) * h.eval(z))(0, 0)) < 1e-14);
    const Realization large = Realization::constant(CMatrix::Constant(col.dims.delta_star, 1, 3.0));
    CHECK_THROWS_AS(aip_solve(d, col, zero, &large), BudgetExceededError);
  }

  TEST_CASE("classify_uniqueness") {
    const AipDataSet boundary_norm = szego(std::sqrt(4.0 / 3.0));
    const RedhefferColligation col = build_colligation(*boundary_norm.P, boundary_norm.T, boundary_norm.E,
                                                       boundary_norm.N);
    const TargetLift lift = lift_target(col, boundary_norm.x);
    CHECK(std::abs(lift.x_tilde.norm() - 1.0) < 1e-14);
    CHECK(classify_uniqueness(col, lift.x_tilde.norm()).uniqueness == Uniqueness::unique_by_budget);
    CHECK(classify_uniqueness(col, 0.5).uniqueness == Uniqueness::non_unique);
    CHECK(to_string(Uniqueness::unique_by_budget) == "unique_by_budget");
    CHECK(to_string(CaseTag::delta_star_trivial) == "delta_star_trivial");
  }

  TEST_CASE("classify_uniqueness: trivial defect spaces") {
    // Two conditions at 0 in the one-dimensional H(K_z) leave both defects trivial.
    CMatrix E(1, 2);
    E << 1.0, 0.0;
    CMatrix J(2, 2);
    J << 0.0, 1.0, 0.0, 0.0;
    const AipDataSet d = oap_to_aip(blaschke({0.0}), E, J, CVector::Zero(2));
    const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
    CHECK(col.dims.x0 == 1);
    CHECK(col.dims.delta_star == 0);
    const UniquenessVerdict v = classify_uniqueness(col, 0.3);
    CHECK(v.uniqueness == Uniqueness::unique_by_dense_range);
    CHECK(v.case_tag == CaseTag::delta_star_trivial);

    // H^2 data (S = 0 with p = 1) where the zero input space forces Delta = 0.
    const AipDataSet h = oap_to_aip(certify_schur(Realization::constant(CMatrix::Zero(1, 0))), E, J, CVector::Zero(2));
    const RedhefferColligation ch = build_colligation(*h.P, h.T, h.E, h.N);
    CHECK(ch.dims.delta == 0);
    const UniquenessVerdict vh = classify_uniqueness(ch, 0.3);
    CHECK(vh.uniqueness == Uniqueness::non_unique);
    CHECK(vh.case_tag == CaseTag::delta_trivial);
  }

  TEST_CASE("parameter_space_norm") {
    const SchurFunction zero = certify_schur(Realization::constant(scalar(0.0)));
    const Realization h(scalar(0.5), scalar(0.375), scalar(1.0), scalar(0.75));
    const auto n = parameter_space_norm(zero, h);
    REQUIRE(n.has_value());
    CHECK(std::abs(*n - std::sqrt(0.75)) < 1e-14);
  }
}
