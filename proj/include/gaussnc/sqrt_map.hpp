#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "gaussnc/errors.hpp"
#include "gaussnc/states.hpp"
#include "gaussnc/symplectic.hpp"
#include "gaussnc/types.hpp"

namespace gaussnc {

namespace detail {

// sqrt(d^2 - 1), clamped to 0 for near-pure modes d in [1 - tol, 1 + 1e-12].
template <typename Scalar>
Scalar thermal_excess(Scalar d) {
  using std::sqrt;
  if (d <= Scalar(1) + Scalar(1e-12)) return Scalar(0);
  return sqrt((d - Scalar(1)) * (d + Scalar(1)));
}

} // namespace detail

/// phi(A) = S^T (D + sqrt(D^2 - I)) S, the quadratic form of the CF of sqrt(rho).
/// Computed as A + S^T sqrt(D^2 - I) S so that pure states map to A exactly.
template <typename Derived>
Matrix<typename Derived::Scalar> phi_of(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_state(A, "phi_of");
  const Matrix<Scalar> M = A;
  const auto w = williamson(M);
  const Eigen::Index n = w.modes();
  Vector<Scalar> excess(2 * n);
  bool pure = true;
  for (Eigen::Index k = 0; k < n; ++k) {
    excess(k) = excess(n + k) = detail::thermal_excess(w.spectrum(k));
    pure = pure && excess(k) == Scalar(0);
  }
  if (pure) return M;
  Matrix<Scalar> phi = M + w.S.transpose() * excess.asDiagonal() * w.S;
  return (phi + phi.transpose()) / Scalar(2);
}

/// Closed form A (I + sqrt(I + (JA)^{-2})) through a Schur-based matrix square
/// root. Independent of the Williamson route; used as a cross-check.
template <typename Derived>
Matrix<typename Derived::Scalar> phi_closed_form(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_state(A, "phi_closed_form");
  const Matrix<Scalar> M = A;
  const Eigen::Index dim = M.rows();
  const Matrix<Scalar> J = standard_form<Scalar>(dim / 2);
  const Matrix<Scalar> JA_inv = (J * M).inverse();
  const Matrix<Scalar> I = Matrix<Scalar>::Identity(dim, dim);
  const Matrix<Scalar> radicand = I + JA_inv * JA_inv;
  const Matrix<Scalar> root = radicand.sqrt();
  Matrix<Scalar> phi = M * (I + root);
  return (phi + phi.transpose()) / Scalar(2);
}

/// det phi(A) = prod_k (d_k + sqrt(d_k^2 - 1))^2 from the symplectic spectrum.
template <typename Derived>
typename Derived::Scalar det_phi(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_state(A, "det_phi");
  Scalar det = 1;
  for (const Scalar d : symplectic_spectrum(A)) {
    const Scalar root = d + detail::thermal_excess(d);
    det *= root * root;
  }
  return det;
}

/// CF of sqrt(rho): scale det(phi(A))^{1/4} (= Tr sqrt(rho)), form phi(A).
template <typename Derived>
GaussianOperatorCF<typename Derived::Scalar> sqrt_cf(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  GaussianOperatorCF<Scalar> out;
  out.form = phi_of(A).template cast<std::complex<Scalar>>();
  out.scale = std::complex<Scalar>(sqrt(sqrt(det_phi(A))), 0);
  return out;
}

} // namespace gaussnc
