// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dbrinterp {

namespace {

CMatrix hermitian_part(const CMatrix& H) { return (H + H.adjoint()) / 2.0; }

void require_square(const CMatrix& M, const char* what) {
  if (M.rows() != M.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << M.rows() << "x" << M.cols();
    throw DimensionError(os.str());
  }
}

struct Svd {
  CMatrix U;
  Eigen::VectorXd sigma;
  CMatrix V;
};

Svd full_svd(const CMatrix& M) {
  Svd out;
  if (M.rows() == 0 || M.cols() == 0) {
    out.U = CMatrix::Identity(M.rows(), M.rows());
    out.V = CMatrix::Identity(M.cols(), M.cols());
    out.sigma.resize(0);
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.U = svd.matrixU();
  out.V = svd.matrixV();
  out.sigma = svd.singularValues();
  return out;
}

Index rank_from_sigma(const Eigen::VectorXd& sigma, const Tolerances& tol, double reference_scale) {
  if (sigma.size() == 0) return 0;
  const double cutoff = tol.rank_tol * std::max(sigma(0), reference_scale);
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

void Tolerances::validate() const {
  for (double v : {rank_tol, psd_tol, residual_tol}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("tolerances must be strictly positive and finite");
  }
}

void require_finite(const CMatrix& M, const char* what) {
  if (!M.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

double operator_norm(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(M);
  return svd.singularValues()(0);
}

PsdVerdict psd_check(const CMatrix& H, const Tolerances& tol) {
  require_square(H, "psd_check");
  PsdVerdict v;
  if (H.rows() == 0) {
    v.is_hermitian = true;
    v.is_psd = true;
    v.min_eigenvalue = std::numeric_limits<double>::infinity();
    return v;
  }
  const double scale = 1.0 + H.norm();
  v.is_hermitian = (H - H.adjoint()).norm() <= tol.residual_tol * scale;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  v.min_eigenvalue = es.eigenvalues()(0);
  v.is_psd = v.is_hermitian && v.min_eigenvalue >= -tol.psd_tol;
  return v;
}

CMatrix sqrt_psd(const CMatrix& H, const Tolerances& tol) {
  require_square(H, "sqrt_psd");
  if (H.rows() == 0) return CMatrix(0, 0);
  const PsdVerdict v = psd_check(H, tol);
  if (!v.is_hermitian) throw DomainError("sqrt_psd: matrix is not Hermitian");
  if (!v.is_psd) {
    std::ostringstream os;
    os.precision(17);
    os << "sqrt_psd: matrix is not positive semidefinite, min eigenvalue " << v.min_eigenvalue;
    throw DomainError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H));
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CMatrix R = es.eigenvectors() * root.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(R);
}

CMatrix pinv(const CMatrix& M, const Tolerances& tol) {
  if (M.size() == 0) return CMatrix::Zero(M.cols(), M.rows());
  const Svd s = full_svd(M);
  const Index r = rank_from_sigma(s.sigma, tol, 0.0);
  CMatrix out = CMatrix::Zero(M.cols(), M.rows());
  for (Index i = 0; i < r; ++i) {
    out += s.V.col(i) * (1.0 / s.sigma(i)) * s.U.col(i).adjoint();
  }
  return out;
}

RangeKernel range_basis(const CMatrix& M, const Tolerances& tol, double reference_scale) {
  const Svd s = full_svd(M);
  const Index r = rank_from_sigma(s.sigma, tol, reference_scale);
  RangeKernel out;
  out.range = s.U.leftCols(r);
  out.kernel = s.V.rightCols(M.cols() - r);
  return out;
}

Index numerical_rank(const CMatrix& M, const Tolerances& tol, double reference_scale) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(M);
  return rank_from_sigma(svd.singularValues(), tol, reference_scale);
}

CMatrix orthogonal_complement(const CMatrix& Q) {
  const Index n = Q.rows();
  const Index k = Q.cols();
  if (k == 0) return CMatrix::Identity(n, n);
  if (k >= n) return CMatrix(n, 0);
  const Svd s = full_svd(Q);
  return s.U.rightCols(n - k);
}

double spectral_radius(const CMatrix& A) {
  require_square(A, "spectral_radius");
  if (A.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix solve_sylvester_stein(const CMatrix& L, const CMatrix& R, const CMatrix& Q, const Tolerances& tol) {
  require_square(L, "solve_sylvester_stein (L)");
  require_square(R, "solve_sylvester_stein (R)");
  if (Q.rows() != L.rows() || Q.cols() != R.rows()) throw DimensionError("solve_sylvester_stein: Q has wrong shape");
  if (Q.size() == 0) return CMatrix::Zero(Q.rows(), Q.cols());
  const double rho = spectral_radius(L) * spectral_radius(R);
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "solve_sylvester_stein: spectral radius product " << rho << " >= 1";
    throw IllPosedError(os.str());
  }
  const Index m = Q.rows();
  const Index n = Q.cols();
  CMatrix K = CMatrix::Identity(m * n, m * n) - kron(R.transpose(), L);
  Eigen::PartialPivLU<CMatrix> lu(K);
  if (!(lu.rcond() > 1e-14)) throw NumericalError("solve_sylvester_stein: vectorized system is singular");
  CVector q = Eigen::Map<const CVector>(Q.data(), m * n);
  CVector x = lu.solve(q);
  CMatrix X = Eigen::Map<CMatrix>(x.data(), m, n);
  const double res = (X - L * X * R - Q).norm();
  if (!(res <= tol.residual_tol * (1.0 + Q.norm()))) {
    throw NumericalError("solve_sylvester_stein: residual " + std::to_string(res) + " above tolerance");
  }
  return X;
}

CMatrix solve_stein(const CMatrix& T, const CMatrix& Q, const Tolerances& tol) {
  require_square(T, "solve_stein (T)");
  require_square(Q, "solve_stein (Q)");
  if (T.rows() != Q.rows()) throw DimensionError("solve_stein: T and Q differ in size");
  const double rho = spectral_radius(T);
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "solve_stein: spectral radius " << rho << " >= 1, solution not unique";
    throw IllPosedError(os.str());
  }
  CMatrix P = solve_sylvester_stein(T.adjoint(), T, Q, tol);
  return hermitian_part(P);
}

CMatrix schur_complement(const CMatrix& M, Index split, SchurPivot which, const Tolerances& tol) {
  require_square(M, "schur_complement");
  if (split < 0 || split > M.rows()) throw DimensionError("schur_complement: invalid split");
  const Index n2 = M.rows() - split;
  const CMatrix A = M.topLeftCorner(split, split);
  const CMatrix B = M.topRightCorner(split, n2);
  const CMatrix C = M.bottomLeftCorner(n2, split);
  const CMatrix D = M.bottomRightCorner(n2, n2);
  if (which == SchurPivot::upper_left) return D - C * pinv(A, tol) * B;
  return A - B * pinv(D, tol) * C;
}

bool psd_by_schur(const CMatrix& M, Index split, SchurPivot which, const Tolerances& tol) {
  require_square(M, "psd_by_schur");
  const Index n2 = M.rows() - split;
  const CMatrix pivot =
      which == SchurPivot::upper_left ? CMatrix(M.topLeftCorner(split, split)) : CMatrix(M.bottomRightCorner(n2, n2));
  const CMatrix off =
      which == SchurPivot::upper_left ? CMatrix(M.topRightCorner(split, n2)) : CMatrix(M.bottomLeftCorner(n2, split));
  if (!psd_check(pivot, tol).is_psd) return false;
  // Off-diagonal block must lie in the range of the pivot.
  const CMatrix proj = pivot * pinv(pivot, tol);
  const CMatrix leak = off - proj * off;
  if (leak.norm() > tol.residual_tol * (1.0 + M.norm())) return false;
  return psd_check(schur_complement(M, split, which, tol), tol).is_psd;
}

CMatrix polar_isometry(const CMatrix& W) {
  if (W.cols() == 0) return W;
  Eigen::JacobiSVD<CMatrix> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix unitary_completion(const CMatrix& V, const Tolerances& tol) {
  const Index n = V.rows();
  const Index k = V.cols();
  if (k > n) throw PreconditionError("unitary_completion: more columns than rows");
  const double defect = (V.adjoint() * V - CMatrix::Identity(k, k)).norm();
  if (defect > tol.residual_tol) {
    std::ostringstream os;
    os << "unitary_completion: columns are not orthonormal (defect " << defect << ")";
    throw PreconditionError(os.str());
  }
  CMatrix U(n, n);
  U.leftCols(k) = V;
  for (Index col = k; col < n; ++col) {
    const auto basis = U.leftCols(col);
    double best_norm = -1.0;
    CVector best_vec;
    for (Index e = 0; e < n; ++e) {
      CVector v = CVector::Unit(n, e);
      for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.adjoint() * v);
      const double nv = v.norm();
      if (nv > best_norm * (1.0 + 1e-12)) {
        best_norm = nv;
        best_vec = v;
      }
    }
    U.col(col) = best_vec / best_norm;
  }
  return U;
}

}  // namespace dbrinterp
