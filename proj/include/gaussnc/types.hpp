#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gaussnc {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Matrix<std::complex<Scalar>>;

template <typename Scalar>
using ComplexVector = Vector<std::complex<Scalar>>;

// Predicate tolerance used when callers do not override it.
template <typename Scalar>
constexpr Scalar default_tol() { return Scalar(1e-9); }

// One-mode parametrization: d = 2n+1 thermal content, m = e^r squeeze,
// theta the rotation of the squeeze axis, A = R(theta)^T diag(d m^2, d/m^2) R(theta).
template <typename Scalar>
struct OneModeParams {
  Scalar d = 1;
  Scalar m = 1;
  Scalar theta = 0;
};

} // namespace gaussnc
