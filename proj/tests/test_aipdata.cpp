// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "dbrinterp/aipdata.hpp"
#include "dbrinterp/oap.hpp"
#include "support.hpp"

using namespace dbrinterp;
using testing::max_abs;

namespace {

CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

SchurFunction zero_schur() { return certify_schur(Realization::constant(scalar(0.0))); }

/// Single node at 1/2 with target 1 in H^2.
AipDataSet szego(double x = 1.0) {
  AipDataSet d = make_aip_data(zero_schur(), scalar(0.5), scalar(1.0), scalar(0.0), CVector::Constant(1, x));
  d.P = compute_P_oap(d);
  return d;
}

}  // namespace

TEST_SUITE("aipdata") {
  TEST_CASE("obs_gramian") {
    CHECK(std::abs(obs_gramian(scalar(1.0), scalar(0.0))(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(obs_gramian(scalar(1.0), scalar(0.5))(0, 0) - 4.0 / 3.0) < 1e-15);
    CMatrix E(1, 2);
    E << 1.0, 0.0;
    CMatrix J(2, 2);
    J << 0.0, 1.0, 0.0, 0.0;
    CHECK(max_abs(obs_gramian(E, J) - CMatrix::Identity(2, 2)) < 1e-15);
    CHECK_THROWS_AS(obs_gramian(scalar(1.0), scalar(1.0)), IllPosedError);
  }

  TEST_CASE("eval_FS") {
    testing::Rng rng(4);
    const AipDataSet d = testing::random_admissible(rng, 3, 2, 2);
    CHECK(max_abs(eval_FS(d, 0.0) - (d.E - d.S.eval(0.0) * d.N)) < 1e-14);

    const AipDataSet s = szego();
    CHECK(std::abs(eval_FS(s, 0.5)(0, 0) - 4.0 / 3.0) < 1e-15);
    const cplx z(0.2, -0.3);
    CHECK(std::abs(eval_FS(s, z)(0, 0) - 1.0 / (1.0 - 0.5 * z)) < 1e-15);
  }

  TEST_CASE("compute_P_oap") {
    CHECK(std::abs((*szego().P)(0, 0) - 4.0 / 3.0) < 1e-15);

    const SchurFunction z = blaschke({0.0});
    AipDataSet d = make_aip_data(z, scalar(0.0), scalar(1.0), build_N(z, scalar(1.0), scalar(0.0)), CVector::Zero(1));
    CHECK(std::abs(d.N(0, 0)) < 1e-15);
    CHECK(std::abs(compute_P_oap(d)(0, 0) - 1.0) < 1e-15);

    AipDataSet e = make_aip_data(zero_schur(), scalar(0.5), scalar(0.0), scalar(0.0), CVector::Zero(1));
    CHECK(std::abs(compute_P_oap(e)(0, 0)) < 1e-15);
    AipDataSet neg = make_aip_data(uncertified(Realization::constant(scalar(1.0))), scalar(0.5), scalar(0.0),
                                   scalar(1.0), CVector::Zero(1));
    const CMatrix Pn = compute_P_oap(neg);
    CHECK_FALSE(check_admissible(neg, Pn).psd_ok);
  }

  TEST_CASE("check_admissible") {
    const AipDataSet s = szego();
    const AdmissibilityReport r = check_admissible(s, *s.P);
    CHECK(r.admissible());
    CHECK(r.stein_residual < 1e-15);
    CHECK(r.fs_membership_residual >= 0.0);
    CHECK_FALSE(r.membership_grid.empty());

    const AdmissibilityReport bad = check_admissible(s, *s.P + CMatrix::Identity(1, 1));
    CHECK_FALSE(bad.stein_ok);
    CHECK(std::abs(bad.stein_residual - 0.75) < 1e-14);

    AipDataSet other = szego(25.0);
    CHECK(check_admissible(other, *other.P).admissible());
  }

  TEST_CASE("check_admissible property: random oap data") {
    testing::Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      const AipDataSet d = testing::random_admissible(rng, 1 + trial % 4, 1 + trial % 2, 1 + trial % 3);
      const AdmissibilityReport r = check_admissible(d, *d.P);
      CHECK(r.admissible());
      CHECK(r.stein_residual >= 0.0);
    }
  }

  TEST_CASE("solvability") {
    const Solvability zero = solvability(scalar(2.0), CVector::Zero(1));
    CHECK(zero.solvable);
    CHECK(zero.margin == doctest::Approx(2.0));
    const Solvability s = solvability(scalar(4.0 / 3.0), CVector::Ones(1));
    CHECK(s.solvable);
    CHECK(std::abs(s.margin - 1.0 / 3.0) < 1e-15);
    const Solvability u = solvability(scalar(1.0), CVector::Constant(1, 2.0));
    CHECK_FALSE(u.solvable);
    CHECK(u.margin == doctest::Approx(-3.0));
  }

  TEST_CASE("kernel_positivity_test") {
    const AipDataSet s = szego();
    const Realization f_min(scalar(0.5), scalar(0.375), scalar(1.0), scalar(0.75));
    const std::vector<cplx> pts = Grid::polar(3, 5, 0.9).points;
    CHECK(kernel_positivity_test(s, *s.P, f_min.as_function(), pts).psd);
    const Realization big = cplx(10.0) * f_min;
    CHECK_FALSE(kernel_positivity_test(s, *s.P, big.as_function(), pts).psd);

    const AipDataSet at0 = make_aip_data(zero_schur(), scalar(0.0), scalar(1.0), scalar(0.0), CVector::Constant(1, 0.3));
    const Realization c = Realization::constant(scalar(0.3));
    CHECK(kernel_positivity_test(at0, compute_P_oap(at0), c.as_function(), {0.0}).psd);
  }

  TEST_CASE("interp_functional") {
    const AipDataSet at0 = make_aip_data(zero_schur(), scalar(0.0), scalar(1.0), scalar(0.0), CVector::Zero(1));
    CHECK(std::abs(interp_functional(at0, Realization::constant(scalar(cplx(0.2, 0.1))))(0) - cplx(0.2, 0.1)) < 1e-15);

    const AipDataSet s = szego();
    const Realization g(scalar(0.5), scalar(0.5), scalar(1.0), scalar(1.0));
    CHECK(std::abs(interp_functional(s, g)(0) - 4.0 / 3.0) < 1e-14);

    CMatrix E(1, 2);
    E << 1.0, 0.0;
    CMatrix J(2, 2);
    J << 0.0, 1.0, 0.0, 0.0;
    const AipDataSet cf = make_aip_data(zero_schur(), J, E, CMatrix::Zero(1, 2), CVector::Zero(2));
    const CVector v = interp_functional(cf, Realization::shift());
    CHECK(std::abs(v(0)) < 1e-15);
    CHECK(std::abs(v(1) - 1.0) < 1e-15);
  }

  TEST_CASE("interp_functional property: values at nodes") {
    testing::Rng rng(31);
    const InterpData np = np_data({cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.6, -0.1)}, {1.0, 2.0, 3.0});
    const AipDataSet d = make_aip_data(zero_schur(), np.T, np.E, CMatrix::Zero(1, 3), np.x);
    const SchurFunction f = testing::random_schur(rng, 3, 1, 1);
    const CVector v = interp_functional(d, f.realization);
    CHECK(std::abs(v(0) - f.eval(cplx(0.1, 0.2))(0, 0)) < 1e-14);
    CHECK(std::abs(v(1) - f.eval(cplx(-0.5, 0.3))(0, 0)) < 1e-14);
    CHECK(std::abs(v(2) - f.eval(cplx(0.6, -0.1))(0, 0)) < 1e-14);
  }

  TEST_CASE("mobius_transform") {
    const AipDataSet s = szego();
    const AipDataSet moved = mobius_transform(s, 0.5);
    CHECK(std::abs(moved.T(0, 0)) < 1e-15);
    CHECK(max_abs(moved.x - s.x) == 0.0);

    testing::Rng rng(9);
    const AipDataSet d = testing::random_admissible(rng, 3, 1, 2);
    const AipDataSet once = mobius_transform(d, 0.0);
    CHECK(max_abs(once.T + d.T) < 1e-15);
    const AipDataSet twice = mobius_transform(once, 0.0);
    CHECK(max_abs(twice.T - d.T) < 1e-14);
    CHECK(max_abs(twice.E - d.E) < 1e-14);
    CHECK(max_abs(twice.N - d.N) < 1e-14);
  }

  TEST_CASE("mobius_transform property: P and admissibility are preserved") {
    testing::Rng rng(10);
    for (int trial = 0; trial < 5; ++trial) {
      const AipDataSet d = testing::random_admissible(rng, 2 + trial % 3, 1, 2);
      const cplx w = testing::random_disk_point(rng, 0.6);
      AipDataSet m = mobius_transform(d, w);
      const CMatrix Pm = compute_P_oap(m);
      CHECK(max_abs(Pm - *d.P) < 1e-10 * (1.0 + max_abs(*d.P)));
      CHECK(check_admissible(m, *d.P).admissible());
    }
  }

  TEST_CASE("make_aip_data rejects bad shapes") {
    CHECK_THROWS_AS(make_aip_data(zero_schur(), scalar(0.5), CMatrix::Ones(2, 1), scalar(0.0), CVector::Zero(1)),
                    DimensionError);
    CHECK_THROWS_AS(make_aip_data(zero_schur(), scalar(2.0), scalar(1.0), scalar(0.0), CVector::Zero(1)), DomainError);
  }
}
