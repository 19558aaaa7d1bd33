#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gaussnc/errors.hpp"
#include "gaussnc/types.hpp"

namespace gaussnc {

/// Standard symplectic form J = [[0, I], [-I, 0]] on R^{2n}, so that
/// sigma(u, v) = u^T J v.
template <typename Scalar = double>
Matrix<Scalar> standard_form(Eigen::Index n) {
  if (n < 1) {
    throw InvalidArgument("standard_form: mode count must be positive");
  }
  Matrix<Scalar> J = Matrix<Scalar>::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n).setIdentity();
  J.bottomLeftCorner(n, n) = -Matrix<Scalar>::Identity(n, n);
  return J;
}

/// 2x2 rotation R(theta) = [[cos, sin], [-sin, cos]].
template <typename Scalar>
Matrix<Scalar> rotation(Scalar theta) {
  using std::cos;
  using std::sin;
  Matrix<Scalar> R(2, 2);
  R << cos(theta), sin(theta), -sin(theta), cos(theta);
  return R;
}

namespace detail {

template <typename Derived>
Eigen::Index mode_count(const Eigen::MatrixBase<Derived>& M, const std::string& what) {
  if (M.rows() != M.cols() || M.rows() == 0 || M.rows() % 2 != 0) {
    throw DimensionMismatch(what + ": expected a square matrix of even dimension, got " +
                            std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
  }
  return M.rows() / 2;
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& A, const std::string& what) {
  using Scalar = typename Derived::Scalar;
  using std::max;
  const Scalar scale = max(Scalar(1), A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale) {
    throw InvalidArgument(what + ": matrix is not symmetric");
  }
}

template <typename Scalar>
struct SkewNormalForm {
  Matrix<Scalar> sqrtA;
  Matrix<Scalar> W;   // orthogonal; columns ordered (x_1..x_n, p_1..p_n)
  Vector<Scalar> d;   // descending
};

// Brings B = A^{1/2} J A^{1/2} (real skew-symmetric, spectrum +-i d_k) to
// W^T B W = [[0, D], [-D, 0]]. Eigenvectors of the symmetric -B^2 are paired
// as (v, -Bv/d) by pivoted Gram-Schmidt, which stays stable when the d_k are
// degenerate (pure states give B^2 = -I exactly).
template <typename Scalar>
SkewNormalForm<Scalar> skew_normal_form(const Matrix<Scalar>& A, Scalar condition_cap) {
  const Eigen::Index n = A.rows() / 2;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(A);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("symplectic: eigendecomposition of A failed");
  }
  const Scalar lo = eig.eigenvalues().minCoeff();
  const Scalar hi = eig.eigenvalues().maxCoeff();
  if (!(lo > Scalar(0))) {
    throw InvalidArgument("symplectic: correlation matrix is not positive definite");
  }
  if (hi / lo > condition_cap) {
    throw NumericalFailure("symplectic: correlation matrix condition number exceeds cap");
  }

  SkewNormalForm<Scalar> out;
  out.sqrtA = eig.operatorSqrt();
  const Matrix<Scalar> J = standard_form<Scalar>(n);
  Matrix<Scalar> B = out.sqrtA * J * out.sqrtA;
  B = (B - B.transpose()).eval() / Scalar(2);
  Matrix<Scalar> C = -B * B;
  C = (C + C.transpose()).eval() / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> sq(C);
  if (sq.info() != Eigen::Success) {
    throw NumericalFailure("symplectic: eigendecomposition of -B^2 failed");
  }

  struct Pair {
    Scalar d;
    Vector<Scalar> v;
    Vector<Scalar> w;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n);
  Matrix<Scalar> basis(2 * n, 0);
  std::vector<bool> used(2 * n, false);
  auto orthogonalize = [&](Vector<Scalar> x) {
    for (int pass = 0; pass < 2; ++pass) x -= basis * (basis.transpose() * x).eval();
    return x;
  };
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pick = -1;
    Scalar best = Scalar(-1);
    Vector<Scalar> v;
    for (Eigen::Index c = 2 * n - 1; c >= 0; --c) {
      if (used[c]) continue;
      Vector<Scalar> r = orthogonalize(sq.eigenvectors().col(c));
      const Scalar norm = r.norm();
      if (norm > best) {
        best = norm;
        pick = c;
        v = r;
      }
    }
    if (!(best > Scalar(0.5))) throw NumericalFailure("symplectic: lost orthogonality pairing modes");
    used[pick] = true;
    v /= best;
    Vector<Scalar> w = orthogonalize(-B * v);
    w -= v * v.dot(w);
    const Scalar wn = w.norm();
    if (!(wn > Scalar(0))) throw NumericalFailure("symplectic: degenerate skew block");
    w /= wn;
    const Scalar d = v.dot(B * w);
    pairs.push_back({d, v, w});
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 2);
    basis.col(basis.cols() - 2) = v;
    basis.col(basis.cols() - 1) = w;
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) { return l.d > r.d; });

  out.W.resize(2 * n, 2 * n);
  out.d.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(pairs[k].d > Scalar(0))) throw NumericalFailure("symplectic: nonpositive symplectic eigenvalue");
    out.d(k) = pairs[k].d;
    out.W.col(k) = pairs[k].v;
    out.W.col(n + k) = pairs[k].w;
  }
  return out;
}

} // namespace detail

/// True iff ||S^T J S - J||_max <= tol.
template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& S,
                   typename Derived::Scalar tol = default_tol<typename Derived::Scalar>()) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = detail::mode_count(S, "is_symplectic");
  const Matrix<Scalar> J = standard_form<Scalar>(n);
  return (S.transpose() * J * S - J).cwiseAbs().maxCoeff() <= tol;
}

/// Symplectic eigenvalues d_k (moduli of the eigenvalues of JA), descending.
/// One mode reduces to sqrt(det A).
template <typename Derived>
Vector<typename Derived::Scalar> symplectic_spectrum(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  const Eigen::Index n = detail::mode_count(A, "symplectic_spectrum");
  detail::require_symmetric(A, "symplectic_spectrum");
  const Matrix<Scalar> M = A;
  if (n == 1) {
    const Scalar det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    if (!(M(0, 0) > Scalar(0)) || !(det > Scalar(0))) {
      throw InvalidArgument("symplectic_spectrum: correlation matrix is not positive definite");
    }
    Vector<Scalar> d(1);
    d(0) = sqrt(det);
    return d;
  }
  return detail::skew_normal_form<Scalar>(M, Scalar(1e12)).d;
}

/// A = S^T D S with S symplectic and D = diag(d_1..d_n, d_1..d_n).
template <typename Scalar>
struct WilliamsonDecomposition {
  Matrix<Scalar> S;
  Vector<Scalar> spectrum;

  Eigen::Index modes() const { return spectrum.size(); }

  Matrix<Scalar> D() const {
    const Eigen::Index n = modes();
    Vector<Scalar> diag(2 * n);
    diag << spectrum, spectrum;
    return diag.asDiagonal();
  }

  Matrix<Scalar> reconstruct() const { return S.transpose() * D() * S; }
};

/// Williamson normal form of a symmetric positive definite A.
///
/// Modes are ordered by descending d_k. Each mode's rotation gauge is fixed so
/// that, in the column where the mode's row pair (k, n+k) of S has the largest
/// norm, the entry in row n+k vanishes and the entry in row k is nonnegative.
/// Degenerate d_k leave the mixing inside the degenerate subspace unspecified.
template <typename Derived>
WilliamsonDecomposition<typename Derived::Scalar> williamson(
    const Eigen::MatrixBase<Derived>& A,
    typename Derived::Scalar condition_cap = typename Derived::Scalar(1e12)) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  const Eigen::Index n = detail::mode_count(A, "williamson");
  detail::require_symmetric(A, "williamson");
  const Matrix<Scalar> M = (A + A.transpose()) / Scalar(2);
  const auto form = detail::skew_normal_form<Scalar>(M, condition_cap);

  Vector<Scalar> inv_sqrt_d(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    inv_sqrt_d(k) = inv_sqrt_d(n + k) = Scalar(1) / sqrt(form.d(k));
  }
  WilliamsonDecomposition<Scalar> out;
  out.spectrum = form.d;
  out.S = inv_sqrt_d.asDiagonal() * form.W.transpose() * form.sqrtA;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = 0;
    Scalar best_norm = Scalar(-1);
    for (Eigen::Index c = 0; c < 2 * n; ++c) {
      const Scalar norm = out.S(k, c) * out.S(k, c) + out.S(n + k, c) * out.S(n + k, c);
      if (norm > best_norm * (Scalar(1) + Scalar(1e-12))) {
        best_norm = norm;
        best = c;
      }
    }
    const Scalar r = sqrt(best_norm);
    const Scalar cs = out.S(k, best) / r;
    const Scalar sn = out.S(n + k, best) / r;
    const Vector<Scalar> top = out.S.row(k).transpose();
    const Vector<Scalar> bottom = out.S.row(n + k).transpose();
    out.S.row(k) = (cs * top + sn * bottom).transpose();
    out.S.row(n + k) = (-sn * top + cs * bottom).transpose();
    out.S(n + k, best) = Scalar(0);
  }
  return out;
}

/// One-mode Euler (Bloch-Messiah) factors S = O diag(m, 1/m) O' with
/// O = R(theta_left), O' = R(theta_right), m >= 1.
template <typename Scalar>
struct EulerFactors {
  Scalar theta_left = 0;
  Scalar theta_right = 0;
  Scalar m = 1;

  Matrix<Scalar> O() const { return rotation(theta_left); }
  Matrix<Scalar> O_prime() const { return rotation(theta_right); }

  Matrix<Scalar> assemble() const {
    Matrix<Scalar> M = Matrix<Scalar>::Zero(2, 2);
    M(0, 0) = m;
    M(1, 1) = Scalar(1) / m;
    return O() * M * O_prime();
  }
};

/// Euler factors of a one-mode symplectic matrix (det S = 1) via SVD.
template <typename Derived>
EulerFactors<typename Derived::Scalar> euler_decompose(const Eigen::MatrixBase<Derived>& S) {
  using Scalar = typename Derived::Scalar;
  using std::atan2;
  using std::sqrt;
  if (S.rows() != 2 || S.cols() != 2) {
    throw DimensionMismatch("euler_decompose: one-mode (2x2) matrix required");
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(Matrix<Scalar>(S), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix<Scalar> U = svd.matrixU();
  Matrix<Scalar> V = svd.matrixV();
  if (U.determinant() < Scalar(0)) {
    U.col(1) *= Scalar(-1);
    V.col(1) *= Scalar(-1);
  }
  if (U.determinant() * V.determinant() < Scalar(0)) {
    throw InvalidArgument("euler_decompose: matrix has negative determinant");
  }
  const auto& sv = svd.singularValues();
  EulerFactors<Scalar> f;
  f.m = sqrt(sv(0) / sv(1));
  const Matrix<Scalar> Vt = V.transpose();
  f.theta_left = atan2(U(0, 1), U(0, 0));
  f.theta_right = atan2(Vt(0, 1), Vt(0, 0));
  return f;
}

} // namespace gaussnc
