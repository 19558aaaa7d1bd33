#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "gaussnc/errors.hpp"
#include "gaussnc/measures.hpp"
#include "gaussnc/states.hpp"
#include "gaussnc/symplectic.hpp"
#include "gaussnc/types.hpp"

namespace gaussnc {

/// Gaussian displacement-noise kernel p_G(v) ~ exp{-v^T G v}. The channel adds
/// -J G^{-1} J to the correlation matrix.
template <typename Scalar>
class NoiseKernel {
 public:
  /// G = g I; g = +inf is the noiseless limit.
  static NoiseKernel isotropic(Eigen::Index modes, Scalar g) {
    if (!(g > Scalar(0))) throw InvalidArgument("NoiseKernel: g must be positive");
    if (modes < 1) throw InvalidArgument("NoiseKernel: mode count must be positive");
    NoiseKernel k;
    k.g_ = g;
    const Scalar inv_g = std::isinf(g) ? Scalar(0) : Scalar(1) / g;
    k.added_ = inv_g * Matrix<Scalar>::Identity(2 * modes, 2 * modes);
    return k;
  }

  /// Arbitrary symmetric positive definite G.
  template <typename Derived>
  static NoiseKernel from_matrix(const Eigen::MatrixBase<Derived>& G) {
    const Eigen::Index n = detail::mode_count(G, "NoiseKernel");
    detail::require_symmetric(G, "NoiseKernel");
    const Matrix<Scalar> M = (G + G.transpose()) / Scalar(2);
    if (Eigen::LLT<Matrix<Scalar>>(M).info() != Eigen::Success) {
      throw InvalidArgument("NoiseKernel: G is not positive definite");
    }
    const Matrix<Scalar> J = standard_form<Scalar>(n);
    NoiseKernel k;
    k.G_ = M;
    k.added_ = -J * M.inverse() * J;
    k.added_ = (k.added_ + k.added_.transpose()).eval() / Scalar(2);
    return k;
  }

  Eigen::Index modes() const { return added_.rows() / 2; }

  /// -J G^{-1} J, the matrix added to A.
  const Matrix<Scalar>& added() const { return added_; }

  std::optional<Scalar> scalar_g() const { return g_; }

  /// Mean thermal photons added, 1/(2g), for isotropic kernels.
  std::optional<Scalar> mean_photons() const {
    if (!g_) return std::nullopt;
    return std::isinf(*g_) ? Scalar(0) : Scalar(1) / (Scalar(2) * *g_);
  }

  /// G = O^T diag(D, D) O with O orthogonal symplectic, i.e. G commutes with J.
  bool has_paired_structure(Scalar tol = default_tol<Scalar>()) const {
    if (g_) return true;
    const Matrix<Scalar> J = standard_form<Scalar>(modes());
    return (G_ * J - J * G_).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  NoiseKernel() = default;

  Matrix<Scalar> G_;
  Matrix<Scalar> added_;
  std::optional<Scalar> g_;
};

/// Gamma(A) = A - J G^{-1} J.
template <typename Derived>
Matrix<typename Derived::Scalar> apply_noise(const Eigen::MatrixBase<Derived>& A,
                                             const NoiseKernel<typename Derived::Scalar>& kernel) {
  detail::require_valid_state(A, "apply_noise");
  if (A.rows() != kernel.added().rows()) {
    throw DimensionMismatch("apply_noise: kernel and state mode counts differ");
  }
  return A + kernel.added();
}

/// One-mode noise in parameters: Gamma(d) = sqrt((1/g + d m^2)(1/g + d/m^2)),
/// Gamma(m)^2 = sqrt((1/g + d m^2)/(1/g + d/m^2)), theta unchanged.
template <typename Scalar>
OneModeParams<Scalar> noise_one_mode(const OneModeParams<Scalar>& p, Scalar g) {
  using std::sqrt;
  detail::require_params(p, "noise_one_mode");
  if (!(g > Scalar(0))) throw InvalidArgument("noise_one_mode: g must be positive");
  using std::max;
  if (std::isinf(g)) return p;
  const Scalar inv_g = Scalar(1) / g;
  const Scalar major = inv_g + p.d * p.m * p.m;
  const Scalar minor = inv_g + p.d / (p.m * p.m);
  return {max(p.d, sqrt(major * minor)), max(Scalar(1), sqrt(sqrt(major / minor))), p.theta};
}

/// The noisy state is classical, boundary included: 1/g + d/m^2 >= 1.
template <typename Scalar>
bool classicality_onset(const OneModeParams<Scalar>& p, Scalar g) {
  detail::require_params(p, "classicality_onset");
  if (!(g > Scalar(0))) throw InvalidArgument("classicality_onset: g must be positive");
  const Scalar inv_g = std::isinf(g) ? Scalar(0) : Scalar(1) / g;
  return inv_g + p.d / (p.m * p.m) >= Scalar(1);
}

/// Critical noise 1/g* = m^2/d - d/m^2 beyond which the nonclassical-branch
/// overlap formula stops increasing; nullopt for classical states.
template <typename Scalar>
std::optional<Scalar> chi_monotonicity_threshold(const OneModeParams<Scalar>& p) {
  detail::require_params(p, "chi_monotonicity_threshold");
  if (is_classical(p, Scalar(0))) return std::nullopt;
  const Scalar x = p.d / (p.m * p.m);
  return Scalar(1) / x - x;
}

template <typename Scalar>
struct InequalitySides {
  Scalar lhs = 0;
  Scalar rhs = 0;
  bool holds() const { return lhs >= rhs; }
};

/// Both sides of the nonclassical-branch monotonicity inequality
/// Gamma(m) sqrt(Gamma(d)) / (m sqrt d) >= (Gamma(d) + Gamma(m)^2) / (d + m^2),
/// evaluated without regard to whether either state is classical.
template <typename Scalar>
InequalitySides<Scalar> chi_monotonicity_sides(const OneModeParams<Scalar>& p, Scalar g) {
  using std::sqrt;
  const auto q = noise_one_mode(p, g);
  return {q.m * sqrt(q.d) / (p.m * sqrt(p.d)), (q.d + q.m * q.m) / (p.d + p.m * p.m)};
}

/// Gamma(m) from Gamma(d): sqrt(a + sqrt(1 + a^2)), a = (m^2 - 1/m^2) / (2 Gamma(d)/d).
template <typename Scalar>
Scalar gamma_m_from_gamma_d(Scalar d, Scalar m, Scalar gamma_d) {
  using std::sqrt;
  const Scalar a = (m * m - Scalar(1) / (m * m)) / (Scalar(2) * gamma_d / d);
  return sqrt(a + sqrt(Scalar(1) + a * a));
}

/// Noise strength recovered from (d, m, Gamma(d)), the positive root of
/// Gamma(d)^2 = x^2 + x d (m^2 + 1/m^2) + d^2 for x = 1/g.
template <typename Scalar>
Scalar inverse_g_from_gamma_d(Scalar d, Scalar m, Scalar gamma_d) {
  using std::sqrt;
  const Scalar s = m * m + Scalar(1) / (m * m);
  const Scalar t = m * m - Scalar(1) / (m * m);
  const Scalar r = gamma_d / d;
  return d * (-s + sqrt(t * t + Scalar(4) * r * r)) / Scalar(2);
}

/// det Gamma(A) = det G^{-1} + Tr G^{-1} Tr A / 2 + det A, one mode, G = g I.
template <typename Derived>
typename Derived::Scalar noisy_determinant_law(const Eigen::MatrixBase<Derived>& A,
                                               typename Derived::Scalar g) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() != 2 || A.cols() != 2) {
    throw DimensionMismatch("noisy_determinant_law: one-mode state required");
  }
  const Scalar inv_g = std::isinf(g) ? Scalar(0) : Scalar(1) / g;
  return inv_g * inv_g + Scalar(2) * inv_g * A.trace() / Scalar(2) + A.determinant();
}

/// Sign-corrected squeeze relation against the photon-number parametrization:
/// sqrt((1+g m^2)/(1+g/m^2)) - sqrt((1+g/m^2)/(1+g m^2))
///   = g (m^2 - 1/m^2) / sqrt((1+g m^2)(1+g/m^2)).
template <typename Scalar>
InequalitySides<Scalar> squeeze_difference_identity(Scalar g, Scalar m) {
  using std::sqrt;
  const Scalar a = Scalar(1) + g * m * m;
  const Scalar b = Scalar(1) + g / (m * m);
  return {sqrt(a / b) - sqrt(b / a), g * (m * m - Scalar(1) / (m * m)) / sqrt(a * b)};
}

/// ((1/g + m^2) + (1/g + 1/m^2)) / sqrt(prod) = sqrt(ratio) + sqrt(1/ratio).
template <typename Scalar>
InequalitySides<Scalar> squeeze_sum_identity(Scalar g, Scalar m) {
  using std::sqrt;
  const Scalar a = Scalar(1) / g + m * m;
  const Scalar b = Scalar(1) / g + Scalar(1) / (m * m);
  return {(a + b) / sqrt(a * b), sqrt(a / b) + sqrt(b / a)};
}

/// One row of a noise scan: state before and after Gamma with both views of
/// the overlap-measure monotonicity.
template <typename Scalar>
struct NoiseScanRow {
  Scalar d = 1;
  Scalar m = 1;
  Scalar g = std::numeric_limits<Scalar>::infinity();
  Scalar gamma_d = 1;
  Scalar gamma_m = 1;
  bool classical_after = true;
  Scalar chi_before = 1;
  Scalar chi_after = 1;
  Scalar phi_before = 1;
  Scalar phi_after = 1;
  Scalar monotonicity_lhs = 1;
  Scalar monotonicity_rhs = 1;
};

template <typename Scalar>
NoiseScanRow<Scalar> noise_scan_row(Scalar d, Scalar m, Scalar g) {
  const OneModeParams<Scalar> p{d, m, Scalar(0)};
  const auto q = noise_one_mode(p, g);
  const auto sides = chi_monotonicity_sides(p, g);
  NoiseScanRow<Scalar> row;
  row.d = d;
  row.m = m;
  row.g = g;
  row.gamma_d = q.d;
  row.gamma_m = q.m;
  row.classical_after = classicality_onset(p, g);
  row.chi_before = chi_one_mode(p);
  row.chi_after = chi_one_mode(q);
  row.phi_before = phi_measure_one_mode(p);
  row.phi_after = phi_measure_one_mode(q);
  row.monotonicity_lhs = sides.lhs;
  row.monotonicity_rhs = sides.rhs;
  return row;
}

} // namespace gaussnc
