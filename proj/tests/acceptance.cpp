// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
// usage: dbrinterp_acceptance <cli-binary> <spec-dir> <work-dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dbrinterp/boundary.hpp"
#include "dbrinterp/homint.hpp"
#include "dbrinterp/oap.hpp"
#include "dbrinterp/solve.hpp"
#include "support.hpp"

using namespace dbrinterp;
using testing::max_abs;
using testing::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// The 25 randomized admissible data sets shared by criteria 1, 2 and 5.
/// Every fifth instance uses a degree-2 Blaschke S, which makes P singular
/// once the state dimension exceeds 2.
std::vector<AipDataSet> generated_instances() {
  Rng rng(20260101);
  std::vector<AipDataSet> out;
  for (int k = 0; k < 25; ++k) {
    const Index n = 1 + k % 8;
    if (k % 5 == 4) {
      const SchurFunction S = blaschke({testing::random_disk_point(rng, 0.7), testing::random_disk_point(rng, 0.7)});
      const CMatrix T = testing::random_stable(rng, n, 0.8);
      const CMatrix E = testing::random_matrix(rng, 1, n);
      AipDataSet d = oap_to_aip(S, E, T, CVector::Zero(n));
      const CVector c = testing::random_vector(rng, n);
      d.x = *d.P * c * (0.7 / std::sqrt(std::real(c.dot(*d.P * c))));
      out.push_back(std::move(d));
    } else {
      out.push_back(testing::random_admissible(rng, n, 1 + k % 3, 1 + (k / 3) % 3));
    }
  }
  return out;
}

Outcome colligation_unitarity(const std::vector<AipDataSet>& inst) {
  const auto t0 = Clock::now();
  Rng rng(1);
  double unit = 0.0, kern = 0.0;
  for (const AipDataSet& d : inst) {
    const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
    const CMatrix& U = col.U;
    unit = std::max(unit, (U.adjoint() * U - CMatrix::Identity(U.cols(), U.cols())).norm());
    for (int k = 0; k < 30; ++k) {
      kern = std::max(kern, sigma_kernel_residual(col, testing::random_disk_point(rng, 0.95),
                                                  testing::random_disk_point(rng, 0.95)));
    }
  }
  const double t = seconds_since(t0);
  return {unit <= 1e-9 && kern <= 1e-8 && t < 10.0,
          "max |U*U-I|_F " + fmt("%.2e", unit) + ", kernel identity " + fmt("%.2e", kern) + ", " + fmt("%.2f", t) + " s"};
}

Outcome central_consistency(const std::vector<AipDataSet>& inst) {
  Rng rng(2);
  double ident = 0.0, decomp = 0.0;
  for (const AipDataSet& d : inst) {
    const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
    const Realization zero = zero_parameter(col);
    const Realization S11 = redheffer_realization(col, zero);
    const AipDataSet central = make_aip_data(uncertified(S11), d.T, d.E, d.N, d.x);
    const auto pts = testing::random_points(rng, 20, 0.95);
    std::vector<GGamma> gg;
    for (const cplx z : pts) {
      gg.push_back(compute_G_Gamma(col, zero, z));
      ident = std::max(ident, max_abs(gg.back().Gamma * col.R - eval_FS(central, z)));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const cplx szego = 1.0 / (1.0 - pts[i] * std::conj(pts[j]));
        const CMatrix rhs = szego * gg[i].G * gg[j].G.adjoint() + gg[i].Gamma * gg[j].Gamma.adjoint();
        decomp = std::max(decomp, max_abs(kernel_KS(S11, pts[i], pts[j]) - rhs));
      }
    }
  }
  return {ident <= 1e-8 && decomp <= 1e-8,
          "Gamma P^1/2 vs F " + fmt("%.2e", ident) + ", kernel decomposition " + fmt("%.2e", decomp)};
}

Outcome szego_oracle() {
  const CMatrix one = CMatrix::Ones(1, 1);
  const CMatrix P = solve_stein(0.5 * one, one);
  const H2Solution s = h2_solve(one, 0.5 * one, CVector::Ones(1));
  double fmax = 0.0, phase = 0.0;
  Rng rng(3);
  const cplx ref = s.B.eval(0.0)(0, 0) / -0.5;
  for (const cplx z : testing::random_points(rng, 30, 0.95)) {
    fmax = std::max(fmax, std::abs(s.f_min.eval(z)(0, 0) - 0.75 / (1.0 - z / 2.0)));
    const cplx b = (z - 0.5) / (1.0 - z / 2.0);
    phase = std::max(phase, std::abs(s.B.eval(z)(0, 0) - ref * b));
  }
  const double norm2 = h2_norm(s.f_min) * h2_norm(s.f_min);
  double inner = 0.0;
  for (const cplx z : testing::random_points(rng, 6)) {
    for (const cplx w : testing::random_points(rng, 6)) inner = std::max(inner, inner_kernel_residual(s, one, 0.5 * one, z, w));
  }
  const double perr = std::abs(P(0, 0) - 4.0 / 3.0);
  const bool ok = perr <= 1e-12 && std::abs(s.P(0, 0) - 4.0 / 3.0) <= 1e-12 && fmax <= 1e-10 &&
                  std::abs(norm2 - 0.75) <= 1e-10 && inner <= 1e-9 && phase <= 1e-9 &&
                  std::abs(std::abs(ref) - 1.0) <= 1e-12;
  return {ok, "|P-4/3| " + fmt("%.1e", perr) + ", f_min " + fmt("%.1e", fmax) + ", |f|^2-3/4 " +
                  fmt("%.1e", std::abs(norm2 - 0.75)) + ", B residual " + fmt("%.1e", inner)};
}

/// H^2 distance between f and the least-norm polynomial of degree <= 200 meeting the conditions.
double truncated_taylor_distance(const InterpData& d, const Realization& f) {
  const Index len = 201;
  const Index n = d.T.rows();
  CMatrix M(n, len);
  CMatrix power = CMatrix::Identity(n, n);
  for (Index k = 0; k < len; ++k) {
    M.col(k) = (d.E * power).adjoint().col(0);
    power = power * d.T;
  }
  const CVector p = M.completeOrthogonalDecomposition().solve(d.x);
  const auto c = f.taylor_coeffs(len);
  double head = 0.0, diff = 0.0;
  for (Index k = 0; k < len; ++k) {
    const cplx ck = c[static_cast<std::size_t>(k)](0, 0);
    head += std::norm(ck);
    diff += std::norm(ck - p(k));
  }
  const double total = h2_norm(f) * h2_norm(f);
  return std::sqrt(diff + std::max(0.0, total - head));
}

Outcome brute_force_h2() {
  const auto t0 = Clock::now();
  Rng rng(4);
  std::vector<InterpData> cases;
  for (int k = 0; k < 4; ++k) {
    cases.push_back(np_data({testing::random_disk_point(rng, 0.8)}, {testing::random_complex(rng, 0.2)}));
    cases.push_back(np_data({testing::random_disk_point(rng, 0.8), testing::random_disk_point(rng, 0.8)},
                            {testing::random_complex(rng, 0.1), testing::random_complex(rng, 0.1)}));
    std::vector<cplx> coeffs;
    for (int j = 0; j <= k % 4; ++j) coeffs.push_back(testing::random_complex(rng, 0.1));
    cases.push_back(cf_data(testing::random_disk_point(rng, 0.6), coeffs));
  }
  double worst = 0.0;
  for (const InterpData& d : cases) {
    const H2Solution s = h2_solve(d.E, d.T, d.x);
    worst = std::max(worst, truncated_taylor_distance(d, s.f_min));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-5 && t < 30.0, std::to_string(cases.size()) + " instances, max H^2 distance " +
                                          fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s"};
}

/// Data with S replaced by the Redheffer transform of a known constant parameter,
/// so that aip_solve can be driven with the parameter that produces S.
struct Reparametrized {
  AipDataSet data;
  RedhefferColligation col;
  Realization param;
};

Reparametrized reparametrize(const AipDataSet& d, Rng& rng) {
  Reparametrized out{d, build_colligation(*d.P, d.T, d.E, d.N), Realization()};
  CMatrix K = testing::random_matrix(rng, out.col.dims.delta_star, out.col.dims.delta);
  if (K.size() > 0) K *= 0.7 / operator_norm(K);
  out.param = Realization::constant(K);
  out.data.S = certify_schur(redheffer_realization(out.col, out.param));
  return out;
}

Outcome route_equivalence(const std::vector<AipDataSet>& inst) {
  Rng rng(5);
  double worst = 0.0;
  int compared = 0;
  for (const AipDataSet& d : inst) {
    const PsdVerdict pv = psd_check(*d.P);
    if (pv.min_eigenvalue <= 1e-8 * (1.0 + operator_norm(*d.P))) continue;
    ++compared;
    const Reparametrized r = reparametrize(d, rng);
    const InverseRouteSolution inv = solve_inverse_route(r.data, *d.P);
    const SolutionFamily fam = aip_solve(r.data, r.col, uncertified(r.param));
    for (const cplx z : testing::random_points(rng, 20, 0.95)) {
      worst = std::max(worst, max_abs(inv.f_min.eval(z) - fam.f.eval(z)));
    }
  }
  return {compared > 0 && worst <= 1e-8,
          std::to_string(compared) + " instances with P > 0, max difference " + fmt("%.2e", worst)};
}

/// b(z) I_k for a scalar realization b.
Realization scalar_times_identity(const Realization& b, Index k) {
  const CMatrix I = CMatrix::Identity(k, k);
  return Realization(kron(b.A(), I), kron(b.B(), I), kron(b.C(), I), kron(b.D(), I));
}

Outcome parameter_round_trip(const std::vector<AipDataSet>& inst) {
  Rng rng(6);
  double worst = 0.0;
  int used = 0;
  for (const AipDataSet& d : inst) {
    const RedhefferColligation col = build_colligation(*d.P, d.T, d.E, d.N);
    if (!injectivity_diagnostics(d.T, *d.P, col).passes()) continue;
    const Index dd = col.dims.delta, ds = col.dims.delta_star;
    if (dd == 0 || ds == 0) continue;
    CMatrix K = testing::random_matrix(rng, ds, dd);
    K *= 0.7 / operator_norm(K);
    const Realization constant = Realization::constant(K);
    const Realization b = blaschke({testing::random_disk_point(rng, 0.6)}).realization;
    const Realization blaschke1 = constant * scalar_times_identity(b, dd);
    ++used;
    for (const Realization* param : {&constant, &blaschke1}) {
      const Realization S = redheffer_realization(col, *param);
      const auto pts = testing::random_points(rng, 8, 0.9);
      const RecoveredParameter rp = recover_parameter(col, S.as_function(), pts);
      for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, max_abs(rp.values[i] - param->eval(pts[i])));
    }
  }
  return {used > 0 && worst <= 1e-7, std::to_string(used) + " instances, max parameter error " + fmt("%.2e", worst)};
}

Outcome intersection_oracle() {
  double dim_ok = true, dist = 0.0, iso = 0.0;
  std::string mismatch;
  for (int a = 0; a <= 6; ++a) {
    for (int b = 1; b <= 6; ++b) {
      const SchurFunction S = blaschke(std::vector<cplx>(static_cast<std::size_t>(a), 0.0));
      const SchurFunction B = blaschke(std::vector<cplx>(static_cast<std::size_t>(b), 0.0));
      const IntersectionSpace is = intersection_space(S, B);
      const int expected = std::max(a - b, 0);
      if (is.image_dim != expected) {
        dim_ok = false;
        mismatch += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
      // Brute force: K_{z^a} cap z^b H^2 = span{z^b, ..., z^{a-1}}.
      for (std::size_t i = 0; i < is.samples.size(); i += 2) {
        const Realization h = is.element(is.samples[i], CVector::Ones(1));
        // Coefficients decay like 0.75^k, so 200 of them resolve the distance.
        const auto c = h.taylor_coeffs(200);
        double outside = 0.0;
        for (int k = 0; k < 200; ++k) {
          if (k < b || k >= a) outside += std::norm(c[static_cast<std::size_t>(k)](0, 0));
        }
        dist = std::max(dist, std::sqrt(outside));
      }
      if (is.isometry_defect) iso = std::max(iso, *is.isometry_defect);
    }
  }
  return {dim_ok && dist <= 1e-8 && iso <= 1e-7,
          std::string(dim_ok ? "dimensions match" : "dimension mismatch at" + mismatch) +
              ", distance to monomial span " + fmt("%.2e", dist) + ", isometry defect " + fmt("%.2e", iso)};
}

Outcome boundary_closed_forms() {
  Rng rng(8);
  double gram = 0.0, stein = 0.0, radial = 0.0;
  std::uniform_int_distribution<int> deg(1, 5), nodes(1, 3), order(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> zeros;
    const int dg = deg(rng);
    for (int k = 0; k < dg; ++k) zeros.push_back(testing::random_disk_point(rng, 0.8));
    const SchurFunction s = blaschke(zeros, std::polar(1.0, 0.3 * trial));
    const int k = nodes(rng);
    std::vector<double> angles;
    std::vector<Index> orders;
    std::vector<std::vector<cplx>> blank;
    for (int i = 0; i < k; ++i) {
      angles.push_back(2.0 * M_PI * i / k + 0.4 * trial);
      orders.push_back(order(rng));
      blank.emplace_back(static_cast<std::size_t>(orders.back() + 1), 0.0);
    }
    const BoundaryDataSet probe = make_boundary_data(s, angles, orders, blank);
    const CMatrix P = compute_P_boundary(probe);
    gram = std::max(gram, max_abs(P - boundary_gram_oracle(probe)));
    const BoundaryMatrices m = build_boundary_data(probe);
    stein = std::max(stein, stein_residual(P, m.T, m.E, m.N));

    // Solvable targets: x = P c with x^* P^+ x = 0.36.
    const CVector c = testing::random_vector(rng, P.rows());
    const CVector x = P * c * (0.6 / std::sqrt(std::real(c.dot(P * c))));
    std::vector<std::vector<cplx>> targets;
    Index pos = 0;
    for (const Index o : orders) {
      targets.emplace_back();
      for (Index j = 0; j <= o; ++j) targets.back().push_back(x(pos++));
    }
    const BoundarySolution sol = solve_boundary(make_boundary_data(s, angles, orders, targets));
    stein = std::max(stein, sol.stein_residual);
    radial = std::max(radial, sol.max_radial_error);
  }
  return {gram <= 1e-7 && stein <= 1e-8 && radial <= 1e-5,
          "Gram " + fmt("%.2e", gram) + ", Stein " + fmt("%.2e", stein) + ", radial " + fmt("%.2e", radial)};
}

Outcome douglas_sweep() {
  Rng rng(9);
  double eq = 0.0, excess = 0.0, minimal = 0.0;
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = dim(rng), a = dim(rng), b = dim(rng);
    CMatrix A = testing::random_matrix(rng, m, a);
    if (trial % 4 == 3 && std::min(m, a) > 1) A.col(0) = A.col(1);  // rank deficient
    CMatrix C = testing::random_matrix(rng, a, b);
    C *= 0.95 / operator_norm(C);
    const CMatrix B = A * C;
    const DouglasParametrization dp = douglas_factor(A, B);
    const CMatrix X0 = dp.minimal();
    std::vector<CMatrix> Xs{X0};
    for (int s = 0; s < 5; ++s) {
      CMatrix K = testing::random_matrix(rng, a, b);
      K /= operator_norm(K);
      Xs.push_back(dp.solve(K));
    }
    for (const CMatrix& X : Xs) {
      eq = std::max(eq, max_abs(A * X - B));
      excess = std::max(excess, operator_norm(X) - 1.0);
    }
    for (int v = 0; v < 2; ++v) {
      const CVector u = testing::random_vector(rng, b);
      for (std::size_t s = 1; s < Xs.size(); ++s) minimal = std::max(minimal, (X0 * u).norm() - (Xs[s] * u).norm());
    }
  }
  return {eq <= 1e-9 && excess <= 1e-9 && minimal <= 1e-9,
          "|AX-B| " + fmt("%.2e", eq) + ", |X|-1 " + fmt("%.2e", excess) + ", minimal-norm excess " +
              fmt("%.2e", minimal)};
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism(const std::string& cli, const std::string& spec_dir, const std::string& work) {
  namespace fs = std::filesystem;
  fs::create_directories(work);
  unsetenv("DBRINTERP_CONFIG");
  std::vector<fs::path> specs;
  for (const auto& e : fs::directory_iterator(spec_dir)) {
    if (e.path().extension() != ".json") continue;
    if (read_bytes(e.path()).find("\"kind\"") == std::string::npos) continue;  // parameter files
    specs.push_back(e.path());
  }
  std::sort(specs.begin(), specs.end());
  int same = 0;
  std::string bad;
  for (const fs::path& spec : specs) {
    std::string out[2];
    bool ran = true;
    for (int run = 0; run < 2; ++run) {
      const fs::path dst = fs::path(work) / (spec.stem().string() + "." + std::to_string(run) + ".json");
      fs::remove(dst);
      const std::string cmd = "\"" + cli + "\" solve \"" + spec.string() + "\" --out \"" + dst.string() + "\"";
      ran = ran && std::system(cmd.c_str()) == 0;
      out[run] = read_bytes(dst);
    }
    if (ran && !out[0].empty() && out[0] == out[1]) {
      ++same;
    } else {
      bad += " " + spec.filename().string();
    }
  }
  const bool ok = !specs.empty() && same == static_cast<int>(specs.size());
  return {ok, std::to_string(same) + "/" + std::to_string(specs.size()) + " specs byte-identical" +
                  (bad.empty() ? "" : ", differing:" + bad)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <cli-binary> <spec-dir> <work-dir>\n", argv[0]);
    return 2;
  }
  const std::vector<AipDataSet> inst = generated_instances();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"colligation unitarity", [&] { return colligation_unitarity(inst); }},
      {"central-solution consistency", [&] { return central_consistency(inst); }},
      {"Szego single-node oracle", szego_oracle},
      {"brute-force H^2 oracle", brute_force_h2},
      {"route equivalence", [&] { return route_equivalence(inst); }},
      {"parameter round-trip", [&] { return parameter_round_trip(inst); }},
      {"intersection oracle", intersection_oracle},
      {"boundary closed forms", boundary_closed_forms},
      {"Douglas lemma sweep", douglas_sweep},
      {"CLI determinism", [&] { return cli_determinism(argv[1], argv[2], argv[3]); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
