// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/rational.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dbrinterp {

namespace {

constexpr double kPoleRcond = 1e-13;

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

Realization::Realization(CMatrix A, CMatrix B, CMatrix C, CMatrix D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  const Index n = A_.rows();
  if (A_.cols() != n || B_.rows() != n || C_.cols() != n || B_.cols() != D_.cols() || C_.rows() != D_.rows()) {
    std::ostringstream os;
    os << "Realization: incompatible blocks A " << A_.rows() << "x" << A_.cols() << ", B " << B_.rows() << "x"
       << B_.cols() << ", C " << C_.rows() << "x" << C_.cols() << ", D " << D_.rows() << "x" << D_.cols();
    throw DimensionError(os.str());
  }
  require_finite(A_, "Realization A");
  require_finite(B_, "Realization B");
  require_finite(C_, "Realization C");
  require_finite(D_, "Realization D");
  rho_ = dbrinterp::spectral_radius(A_);
}

Realization Realization::constant(const CMatrix& D) {
  return Realization(CMatrix(0, 0), CMatrix(0, D.cols()), CMatrix(D.rows(), 0), D);
}

Realization Realization::shift(Index m) {
  return Realization(CMatrix::Zero(m, m), CMatrix::Identity(m, m), CMatrix::Identity(m, m), CMatrix::Zero(m, m));
}

CMatrix resolvent(const CMatrix& A, cplx z) {
  const Index n = A.rows();
  if (n == 0) return CMatrix(0, 0);
  CMatrix M = CMatrix::Identity(n, n) - z * A;
  Eigen::PartialPivLU<CMatrix> lu(M);
  if (!(lu.rcond() > kPoleRcond)) {
    std::ostringstream os;
    os.precision(17);
    os << "pole: I - zA is singular at z = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    throw PoleError(os.str(), z.real(), z.imag());
  }
  return lu.inverse();
}

CMatrix Realization::eval(cplx z) const {
  if (state_dim() == 0) return D_;
  return D_ + z * C_ * resolvent(A_, z) * B_;
}

std::vector<CMatrix> Realization::taylor_coeffs(Index m) const {
  std::vector<CMatrix> out;
  if (m <= 0) return out;
  out.reserve(static_cast<std::size_t>(m));
  out.push_back(D_);
  CMatrix AkB = B_;
  for (Index k = 1; k < m; ++k) {
    out.push_back(C_ * AkB);
    AkB = A_ * AkB;
  }
  return out;
}

std::vector<CMatrix> Realization::taylor_at(cplx w, Index m) const {
  std::vector<CMatrix> out;
  if (m <= 0) return out;
  out.push_back(eval(w));
  if (state_dim() == 0) {
    for (Index j = 1; j < m; ++j) out.push_back(CMatrix::Zero(output_dim(), input_dim()));
    return out;
  }
  // z (I - zA)^{-1} = sum_j h^j [w R (AR)^j + R (AR)^{j-1}] with z = w + h, R = (I - wA)^{-1}.
  const CMatrix R = resolvent(A_, w);
  const CMatrix AR = A_ * R;
  CMatrix prev = R;  // R (AR)^{j-1}
  for (Index j = 1; j < m; ++j) {
    const CMatrix cur = prev * AR;  // R (AR)^j
    out.push_back(C_ * (w * cur + prev) * B_);
    prev = cur;
  }
  return out;
}

MatrixFunction Realization::as_function() const {
  return [self = *this](cplx z) { return self.eval(z); };
}

Realization operator*(const Realization& l, const Realization& r) {
  if (l.input_dim() != r.output_dim()) throw DimensionError("Realization product: inner dimensions differ");
  const Index n1 = l.state_dim();
  const Index n2 = r.state_dim();
  CMatrix A = CMatrix::Zero(n1 + n2, n1 + n2);
  A.topLeftCorner(n1, n1) = l.A();
  A.topRightCorner(n1, n2) = l.B() * r.C();
  A.bottomRightCorner(n2, n2) = r.A();
  CMatrix B(n1 + n2, r.input_dim());
  B.topRows(n1) = l.B() * r.D();
  B.bottomRows(n2) = r.B();
  CMatrix C(l.output_dim(), n1 + n2);
  C.leftCols(n1) = l.C();
  C.rightCols(n2) = l.D() * r.C();
  return Realization(A, B, C, l.D() * r.D());
}

Realization operator+(const Realization& l, const Realization& r) {
  if (l.input_dim() != r.input_dim() || l.output_dim() != r.output_dim()) {
    throw DimensionError("Realization sum: shapes differ");
  }
  CMatrix B(l.state_dim() + r.state_dim(), l.input_dim());
  B << l.B(), r.B();
  CMatrix C(l.output_dim(), l.state_dim() + r.state_dim());
  C << l.C(), r.C();
  return Realization(block_diag(l.A(), r.A()), B, C, l.D() + r.D());
}

Realization operator-(const Realization& l, const Realization& r) { return l + cplx(-1.0) * r; }

Realization operator*(const CMatrix& M, const Realization& R) {
  if (M.cols() != R.output_dim()) throw DimensionError("constant * Realization: shapes differ");
  return Realization(R.A(), R.B(), M * R.C(), M * R.D());
}

Realization operator*(const Realization& R, const CMatrix& M) {
  if (M.rows() != R.input_dim()) throw DimensionError("Realization * constant: shapes differ");
  return Realization(R.A(), R.B() * M, R.C(), R.D() * M);
}

Realization operator*(cplx c, const Realization& R) { return Realization(R.A(), R.B(), c * R.C(), c * R.D()); }

Realization hstack(const Realization& l, const Realization& r) {
  if (l.output_dim() != r.output_dim()) throw DimensionError("hstack: output dimensions differ");
  const Index n1 = l.state_dim();
  const Index n2 = r.state_dim();
  CMatrix B = CMatrix::Zero(n1 + n2, l.input_dim() + r.input_dim());
  B.topLeftCorner(n1, l.input_dim()) = l.B();
  B.bottomRightCorner(n2, r.input_dim()) = r.B();
  CMatrix C(l.output_dim(), n1 + n2);
  C << l.C(), r.C();
  CMatrix D(l.output_dim(), l.input_dim() + r.input_dim());
  D << l.D(), r.D();
  return Realization(block_diag(l.A(), r.A()), B, C, D);
}

Realization vstack(const Realization& t, const Realization& b) {
  if (t.input_dim() != b.input_dim()) throw DimensionError("vstack: input dimensions differ");
  const Index n1 = t.state_dim();
  const Index n2 = b.state_dim();
  CMatrix B(n1 + n2, t.input_dim());
  B << t.B(), b.B();
  CMatrix C = CMatrix::Zero(t.output_dim() + b.output_dim(), n1 + n2);
  C.topLeftCorner(t.output_dim(), n1) = t.C();
  C.bottomRightCorner(b.output_dim(), n2) = b.C();
  CMatrix D(t.output_dim() + b.output_dim(), t.input_dim());
  D << t.D(), b.D();
  return Realization(block_diag(t.A(), b.A()), B, C, D);
}

Realization compose_involution(const Realization& R, cplx w) {
  if (std::abs(w) >= 1.0) throw DomainError("compose_involution: point must lie in the open disk");
  const Index n = R.state_dim();
  if (n == 0) return R;
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix M = I - w * R.A();
  Eigen::PartialPivLU<CMatrix> lu(M);
  if (!(lu.rcond() > kPoleRcond)) throw PoleError("compose_involution: I - wA is singular", w.real(), w.imag());
  const CMatrix Minv = lu.inverse();
  const double s = std::sqrt(1.0 - std::norm(w));
  const CMatrix A = (std::conj(w) * I - R.A()) * Minv;
  const CMatrix B = s * Minv * R.B();
  const CMatrix C = -s * R.C() * Minv;
  const CMatrix D = R.D() + w * R.C() * Minv * R.B();
  return Realization(A, B, C, D);
}

Grid Grid::polar(int n_r, int n_theta, double r_max) {
  Grid g;
  for (int i = 1; i <= n_r; ++i) {
    const double r = r_max * static_cast<double>(i) / n_r;
    for (int j = 0; j < n_theta; ++j) {
      g.points.push_back(std::polar(r, 2.0 * std::numbers::pi * j / n_theta));
    }
  }
  std::ostringstream os;
  os << "polar " << n_r << "x" << n_theta << " r_max=" << r_max;
  g.label = os.str();
  return g;
}

Grid Grid::circle(int m) {
  Grid g;
  for (int j = 0; j < m; ++j) g.points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / m));
  g.label = "circle " + std::to_string(m);
  return g;
}

SchurFunction uncertified(Realization R) {
  SchurFunction s;
  s.realization = std::move(R);
  return s;
}

CMatrix kernel_from_values(const CMatrix& Sz, const CMatrix& Szeta, cplx z, cplx zeta) {
  const cplx denom = 1.0 - z * std::conj(zeta);
  if (std::abs(denom) < 1e-14) throw DomainError("kernel_KS: 1 - z conj(zeta) vanishes");
  const Index q = Sz.rows();
  return (CMatrix::Identity(q, q) - Sz * Szeta.adjoint()) / denom;
}

CMatrix kernel_KS(const Realization& S, cplx z, cplx zeta) {
  const cplx denom = 1.0 - z * std::conj(zeta);
  if (std::abs(denom) < 1e-14) throw DomainError("kernel_KS: 1 - z conj(zeta) vanishes");
  return kernel_from_values(S.eval(z), S.eval(zeta), z, zeta);
}

SchurFunction blaschke(const std::vector<cplx>& zeros, cplx phase, const Tolerances& tol) {
  if (std::abs(std::abs(phase) - 1.0) > tol.residual_tol) throw DomainError("blaschke: phase must be unimodular");
  Realization R = Realization::constant(CMatrix::Constant(1, 1, phase));
  for (const cplx a : zeros) {
    if (!(std::abs(a) < 1.0)) throw DomainError("blaschke: zero on or outside the unit circle");
    const double s = std::sqrt(1.0 - std::norm(a));
    Realization factor(CMatrix::Constant(1, 1, std::conj(a)), CMatrix::Constant(1, 1, s), CMatrix::Constant(1, 1, s),
                       CMatrix::Constant(1, 1, -a));
    R = R * factor;
  }
  SchurFunction out = uncertified(R);
  const Grid circle = Grid::circle(64);
  double worst = 0.0;
  for (const cplx t : circle.points) worst = std::max(worst, std::abs(std::abs(R.eval(t)(0, 0)) - 1.0));
  out.certified_inner = worst <= tol.residual_tol;
  out.certified_contractive = out.certified_inner && R.is_stable();
  out.inner_grid = circle.label;
  out.contractive_grid = "inner realization (stable, unitary colligation)";
  return out;
}

SchurFunction certify_schur(const Realization& S, const Grid& disk_grid, const Grid& circle_grid,
                            const Tolerances& tol) {
  SchurFunction out = uncertified(S);
  bool contractive = true;
  for (const cplx z : disk_grid.points) {
    try {
      if (operator_norm(S.eval(z)) > 1.0 + tol.psd_tol) {
        contractive = false;
        break;
      }
    } catch (const PoleError&) {
      contractive = false;
      break;
    }
  }
  out.certified_contractive = contractive;
  out.contractive_grid = disk_grid.label;
  bool inner = contractive;
  if (inner) {
    const Index p = S.input_dim();
    for (const cplx t : circle_grid.points) {
      try {
        const CMatrix v = S.eval(t);
        if ((v.adjoint() * v - CMatrix::Identity(p, p)).norm() > tol.residual_tol) {
          inner = false;
          break;
        }
      } catch (const PoleError&) {
        inner = false;
        break;
      }
    }
  }
  out.certified_inner = inner;
  out.inner_grid = circle_grid.label;
  return out;
}

cplx h2_inner_product(const Realization& f, const Realization& g, const Tolerances& tol) {
  if (f.input_dim() != g.input_dim() || f.output_dim() != g.output_dim()) {
    throw DimensionError("h2_inner_product: shapes differ");
  }
  if (!f.is_stable() || !g.is_stable()) throw DomainError("h2_inner_product: realization is not stable");
  cplx out = (g.D().adjoint() * f.D()).trace();
  if (f.state_dim() > 0 && g.state_dim() > 0) {
    const CMatrix X = solve_sylvester_stein(g.A().adjoint(), f.A(), g.C().adjoint() * f.C(), tol);
    out += (g.B().adjoint() * X * f.B()).trace();
  }
  return out;
}

double h2_norm(const Realization& f, const Tolerances& tol) {
  return std::sqrt(std::max(0.0, h2_inner_product(f, f, tol).real()));
}

CMatrix realization_obs_gramian(const Realization& R, const Tolerances& tol) {
  return solve_stein(R.A(), R.C().adjoint() * R.C(), tol);
}

}  // namespace dbrinterp
