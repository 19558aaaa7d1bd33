#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "gaussnc/errors.hpp"
#include "gaussnc/symplectic.hpp"
#include "gaussnc/types.hpp"

namespace gaussnc {

/// Characteristic function of a zero-mean Gaussian state, exp{-u^T A u / 4}.
template <typename DerivedA, typename DerivedU>
typename DerivedA::Scalar cf_eval(const Eigen::MatrixBase<DerivedA>& A,
                                  const Eigen::MatrixBase<DerivedU>& u) {
  using std::exp;
  detail::mode_count(A, "cf_eval");
  if (u.size() != A.rows()) {
    throw DimensionMismatch("cf_eval: vector length does not match correlation matrix");
  }
  return exp(-(u.transpose() * A * u).value() / 4);
}

enum class StateClass { Invalid, PureNonclassical, PureCoherent, MixedClassical, MixedNonclassical };

inline std::string_view to_string(StateClass c) {
  switch (c) {
    case StateClass::Invalid: return "Invalid";
    case StateClass::PureNonclassical: return "PureNonclassical";
    case StateClass::PureCoherent: return "PureCoherent";
    case StateClass::MixedClassical: return "MixedClassical";
    case StateClass::MixedNonclassical: return "MixedNonclassical";
  }
  return "Invalid";
}

/// All symplectic eigenvalues >= 1 - tol.
template <typename Derived>
bool is_valid_state(const Eigen::MatrixBase<Derived>& A,
                    typename Derived::Scalar tol = default_tol<typename Derived::Scalar>()) {
  using Scalar = typename Derived::Scalar;
  detail::mode_count(A, "is_valid_state");
  detail::require_symmetric(A, "is_valid_state");
  const Matrix<Scalar> M = (A + A.transpose()) / Scalar(2);
  if (Eigen::LLT<Matrix<Scalar>>(M).info() != Eigen::Success) return false;
  return symplectic_spectrum(M).minCoeff() >= Scalar(1) - tol;
}

namespace detail {

template <typename Derived>
void require_valid_state(const Eigen::MatrixBase<Derived>& A, const std::string& what,
                         typename Derived::Scalar tol = default_tol<typename Derived::Scalar>()) {
  detail::mode_count(A, what);
  detail::require_symmetric(A, what);
  if (!is_valid_state(A, tol)) {
    throw InvalidState(what + ": correlation matrix has a symplectic eigenvalue below 1");
  }
}

} // namespace detail

/// Classification with the classical boundary (A - I singular PSD) counted as classical.
template <typename Derived>
StateClass classify(const Eigen::MatrixBase<Derived>& A,
                    typename Derived::Scalar tol = default_tol<typename Derived::Scalar>()) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = detail::mode_count(A, "classify");
  detail::require_symmetric(A, "classify");
  if (!is_valid_state(A, tol)) return StateClass::Invalid;

  const Matrix<Scalar> M = (A + A.transpose()) / Scalar(2);
  const Matrix<Scalar> J = standard_form<Scalar>(n);
  const bool pure = (M + J * M.inverse() * J).cwiseAbs().maxCoeff() <= tol;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(M - Matrix<Scalar>::Identity(2 * n, 2 * n),
                                                    Eigen::EigenvaluesOnly);
  const bool classical = eig.eigenvalues().minCoeff() >= -tol;
  if (pure) return classical ? StateClass::PureCoherent : StateClass::PureNonclassical;
  return classical ? StateClass::MixedClassical : StateClass::MixedNonclassical;
}

/// CF of a (not necessarily normalized or Hermitian) Gaussian operator:
/// CF_u = scale * exp{-u^T form u / 4}. Products of non-commuting operators
/// carry a complex-symmetric form.
template <typename Scalar>
struct GaussianOperatorCF {
  std::complex<Scalar> scale{1, 0};
  ComplexMatrix<Scalar> form;

  Eigen::Index modes() const { return form.rows() / 2; }

  template <typename DerivedU>
  std::complex<Scalar> eval(const Eigen::MatrixBase<DerivedU>& u) const {
    const ComplexVector<Scalar> z = u.template cast<std::complex<Scalar>>();
    return scale * std::exp(-(z.transpose() * form * z).value() / Scalar(4));
  }

  /// Largest imaginary magnitude over scale and form entries.
  Scalar imaginary_residue() const {
    using std::abs;
    using std::max;
    Scalar r = abs(scale.imag());
    if (form.size() > 0) r = max(r, form.imag().cwiseAbs().maxCoeff());
    return r;
  }

  /// Symmetrized real part of the form; throws when the imaginary part exceeds tol.
  Matrix<Scalar> real_form(Scalar tol = Scalar(1e-10)) const {
    if (form.size() > 0 && form.imag().cwiseAbs().maxCoeff() > tol) {
      throw NumericalFailure("GaussianOperatorCF: quadratic form is not real");
    }
    const Matrix<Scalar> re = form.real();
    return (re + re.transpose()) / Scalar(2);
  }

  Scalar real_scale(Scalar tol = Scalar(1e-10)) const {
    using std::abs;
    if (abs(scale.imag()) > tol) {
      throw NumericalFailure("GaussianOperatorCF: scale is not real");
    }
    return scale.real();
  }
};

/// CF of a density operator with correlation matrix A.
template <typename Derived>
GaussianOperatorCF<typename Derived::Scalar> density_cf(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  detail::mode_count(A, "density_cf");
  return {std::complex<Scalar>(1, 0), A.template cast<std::complex<Scalar>>()};
}

/// CF of the operator product X Y for Gaussian operators X, Y:
/// scale_X scale_Y det((B_X + B_Y)/2)^{-1/2},
/// form B_Y - (B_Y - iJ)(B_X + B_Y)^{-1}(B_Y + iJ).
template <typename Scalar>
GaussianOperatorCF<Scalar> operator_product(const GaussianOperatorCF<Scalar>& X,
                                            const GaussianOperatorCF<Scalar>& Y) {
  using C = std::complex<Scalar>;
  if (X.form.rows() != Y.form.rows()) {
    throw DimensionMismatch("operator_product: mode counts differ");
  }
  const Eigen::Index n = X.modes();
  const ComplexMatrix<Scalar> iJ = C(0, 1) * standard_form<Scalar>(n).template cast<C>();
  const ComplexMatrix<Scalar> sum = X.form + Y.form;
  Eigen::PartialPivLU<ComplexMatrix<Scalar>> lu(sum);
  const C det_half = (sum / Scalar(2)).determinant();
  if (std::abs(det_half) == Scalar(0)) {
    throw NumericalFailure("operator_product: singular sum of quadratic forms");
  }
  GaussianOperatorCF<Scalar> out;
  out.scale = X.scale * Y.scale / std::sqrt(det_half);
  out.form = Y.form - (Y.form - iJ) * lu.solve(Y.form + iJ);
  return out;
}

/// CF of rho_1 rho_2; evaluating at u = 0 gives Tr rho_1 rho_2.
template <typename Derived1, typename Derived2>
GaussianOperatorCF<typename Derived1::Scalar> product_cf(const Eigen::MatrixBase<Derived1>& A1,
                                                         const Eigen::MatrixBase<Derived2>& A2) {
  detail::require_valid_state(A1, "product_cf");
  detail::require_valid_state(A2, "product_cf");
  if (A1.rows() != A2.rows()) throw DimensionMismatch("product_cf: mode counts differ");
  return operator_product(density_cf(A1), density_cf(A2));
}

/// CF of rho^2: scale (det A)^{-1/2}, form (A - J A^{-1} J)/2.
template <typename Derived>
GaussianOperatorCF<typename Derived::Scalar> square_cf(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  detail::require_valid_state(A, "square_cf");
  const Matrix<Scalar> M = A;
  const Matrix<Scalar> J = standard_form<Scalar>(M.rows() / 2);
  Matrix<Scalar> form = (M - J * M.inverse() * J) / Scalar(2);
  form = (form + form.transpose()).eval() / Scalar(2);
  GaussianOperatorCF<Scalar> out;
  out.scale = std::complex<Scalar>(Scalar(1) / sqrt(M.determinant()), 0);
  out.form = form.template cast<std::complex<Scalar>>();
  return out;
}

/// A = R(theta)^T diag(d m^2, d / m^2) R(theta).
template <typename Scalar>
Matrix<Scalar> params_to_cov(const OneModeParams<Scalar>& p) {
  if (!(p.d >= Scalar(1))) throw InvalidArgument("params_to_cov: d must be >= 1");
  if (!(p.m > Scalar(0))) throw InvalidArgument("params_to_cov: m must be positive");
  Matrix<Scalar> diag = Matrix<Scalar>::Zero(2, 2);
  diag(0, 0) = p.d * p.m * p.m;
  diag(1, 1) = p.d / (p.m * p.m);
  const Matrix<Scalar> R = rotation(p.theta);
  Matrix<Scalar> A = R.transpose() * diag * R;
  A(1, 0) = A(0, 1);
  return A;
}

/// Inverse of params_to_cov on the canonical branch d >= 1, m >= 1,
/// theta in [0, pi); theta = 0 when the state is isotropic.
template <typename Derived>
OneModeParams<typename Derived::Scalar> cov_to_params(
    const Eigen::MatrixBase<Derived>& A,
    typename Derived::Scalar tol = default_tol<typename Derived::Scalar>()) {
  using Scalar = typename Derived::Scalar;
  using std::atan2;
  using std::hypot;
  using std::sqrt;
  if (A.rows() != 2 || A.cols() != 2) {
    throw DimensionMismatch("cov_to_params: one-mode (2x2) correlation matrix required");
  }
  detail::require_valid_state(A, "cov_to_params", tol);
  const Scalar a = A(0, 0);
  const Scalar c = A(1, 1);
  const Scalar b = (A(0, 1) + A(1, 0)) / Scalar(2);
  const Scalar det = a * c - b * b;
  const Scalar half_gap = hypot((a - c) / Scalar(2), b);
  const Scalar hi = (a + c) / Scalar(2) + half_gap;
  const Scalar lo = det / hi;

  OneModeParams<Scalar> p;
  p.d = sqrt(det);
  p.m = sqrt(sqrt(hi / lo));
  if (half_gap <= Scalar(1e-14) * hi) {
    p.m = 1;
    p.theta = 0;
    return p;
  }
  Scalar theta = atan2(Scalar(2) * b, a - c) / Scalar(2);
  if (theta < Scalar(0)) theta += std::numbers::pi_v<Scalar>;
  if (theta >= std::numbers::pi_v<Scalar>) theta -= std::numbers::pi_v<Scalar>;
  p.theta = theta;
  return p;
}

/// Gaussian P-function P(v) = normalizer * exp{v^T Q v} with
/// normalizer = pi^{-n} det(A - I)^{-1/2} and Q = J (A - I)^{-1} J.
/// Mixing displaced vacua V(v)^dag |0><0| V(v) with this density reproduces A.
template <typename Scalar>
struct GaussianPFunction {
  Scalar normalizer = 0;
  Matrix<Scalar> Q;

  template <typename DerivedV>
  Scalar density(const Eigen::MatrixBase<DerivedV>& v) const {
    using std::exp;
    return normalizer * exp((v.transpose() * Q * v).value());
  }

  /// Covariance of v under P, (-1/2) Q^{-1} = J (A - I) J^T / 2.
  Matrix<Scalar> covariance() const {
    Matrix<Scalar> cov = -Q.inverse() / Scalar(2);
    return (cov + cov.transpose()) / Scalar(2);
  }
};

template <typename Derived>
GaussianPFunction<typename Derived::Scalar> p_function(const Eigen::MatrixBase<Derived>& A,
                                                       typename Derived::Scalar tol =
                                                           typename Derived::Scalar(1e-12)) {
  using Scalar = typename Derived::Scalar;
  using std::pow;
  using std::sqrt;
  const Eigen::Index n = detail::mode_count(A, "p_function");
  detail::require_symmetric(A, "p_function");
  const Matrix<Scalar> X = (A + A.transpose()) / Scalar(2) - Matrix<Scalar>::Identity(2 * n, 2 * n);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(X, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > tol)) {
    throw NoPRepresentation("p_function: A - I is not positive definite");
  }
  const Matrix<Scalar> J = standard_form<Scalar>(n);
  GaussianPFunction<Scalar> pf;
  pf.normalizer = pow(std::numbers::pi_v<Scalar>, -Scalar(n)) / sqrt(X.determinant());
  pf.Q = J * X.inverse() * J;
  pf.Q = (pf.Q + pf.Q.transpose()).eval() / Scalar(2);
  return pf;
}

/// Draws `count` phase-space points from the P-function, one per column.
/// Identical seeds give identical draws.
template <typename Scalar>
Matrix<Scalar> sample_p_function(const GaussianPFunction<Scalar>& pf, Eigen::Index count,
                                 std::uint64_t seed) {
  const Eigen::LLT<Matrix<Scalar>> chol(pf.covariance());
  if (chol.info() != Eigen::Success) {
    throw NumericalFailure("sample_p_function: covariance is not positive definite");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal(0, 1);
  Matrix<Scalar> z(pf.Q.rows(), count);
  for (Eigen::Index j = 0; j < count; ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  return chol.matrixL() * z;
}

} // namespace gaussnc
