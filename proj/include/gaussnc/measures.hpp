#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussnc/errors.hpp"
#include "gaussnc/sqrt_map.hpp"
#include "gaussnc/states.hpp"
#include "gaussnc/symplectic.hpp"
#include "gaussnc/types.hpp"

namespace gaussnc {

namespace detail {

template <typename D1, typename D2>
void require_pair(const Eigen::MatrixBase<D1>& A1, const Eigen::MatrixBase<D2>& A2,
                  const std::string& what) {
  detail::require_valid_state(A1, what);
  detail::require_valid_state(A2, what);
  if (A1.rows() != A2.rows()) throw DimensionMismatch(what + ": mode counts differ");
}

template <typename Scalar>
void require_params(const OneModeParams<Scalar>& p, const std::string& what) {
  if (!(p.d >= Scalar(1))) throw InvalidState(what + ": d must be >= 1");
  if (!(p.m >= Scalar(1))) throw InvalidArgument(what + ": m must be >= 1 (canonical branch)");
}

template <typename Scalar>
Scalar phi_scalar(Scalar d) {
  return d + thermal_excess(d);
}

// Delta-theta, m_1, m_2 dependent part of the one-mode overlap and fidelity.
template <typename Scalar>
Scalar squeeze_mismatch(Scalar delta_theta, Scalar m1, Scalar m2) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(delta_theta);
  const Scalar c = cos(delta_theta);
  const Scalar prod = m1 * m1 * m2 * m2;
  const Scalar ratio = (m1 / m2) * (m1 / m2);
  return Scalar(2) + s * s * (prod + Scalar(1) / prod) + c * c * (ratio + Scalar(1) / ratio);
}

} // namespace detail

/// Holevo overlap Tr sqrt(rho_1) sqrt(rho_2) =
/// sqrt( sqrt(det phi_1 det phi_2) / det((phi_1 + phi_2)/2) ).
template <typename D1, typename D2>
typename D1::Scalar holevo_overlap(const Eigen::MatrixBase<D1>& A1,
                                   const Eigen::MatrixBase<D2>& A2) {
  using Scalar = typename D1::Scalar;
  using std::sqrt;
  detail::require_pair(A1, A2, "holevo_overlap");
  const Matrix<Scalar> phi1 = phi_of(A1);
  const Matrix<Scalar> phi2 = phi_of(A2);
  const Scalar mean_det = ((phi1 + phi2) / Scalar(2)).determinant();
  return sqrt(sqrt(det_phi(A1) * det_phi(A2)) / mean_det);
}

/// One-mode overlap in (d, m, theta) coordinates, 2 / sqrt(H).
template <typename Scalar>
Scalar overlap_one_mode(const OneModeParams<Scalar>& p1, const OneModeParams<Scalar>& p2) {
  using std::sqrt;
  detail::require_params(p1, "overlap_one_mode");
  detail::require_params(p2, "overlap_one_mode");
  const Scalar f1 = detail::phi_scalar(p1.d);
  const Scalar f2 = detail::phi_scalar(p2.d);
  const Scalar H = (f1 - f2) * (f1 - f2) / (f1 * f2) +
                   detail::squeeze_mismatch(p1.theta - p2.theta, p1.m, p2.m);
  return Scalar(2) / sqrt(H);
}

/// True iff the one-mode state is classical, boundary included (d >= m^2).
template <typename Scalar>
bool is_classical(const OneModeParams<Scalar>& p, Scalar tol = default_tol<Scalar>()) {
  return p.d / (p.m * p.m) >= Scalar(1) - tol;
}

/// Overlap-based nonclassical distance of a one-mode state; 1 for classical states.
template <typename Scalar>
Scalar chi_one_mode(const OneModeParams<Scalar>& p) {
  using std::sqrt;
  detail::require_params(p, "chi_one_mode");
  if (is_classical(p)) return Scalar(1);
  const Scalar r = sqrt(p.d) / p.m;
  return Scalar(2) / (r + Scalar(1) / r);
}

/// Conjectured overlap distance of a pure multimode squeezed state,
/// 1 / prod_k (m_k + 1/m_k)/2.
template <typename Scalar>
Scalar chi_pure_multimode(std::span<const Scalar> squeezes) {
  Scalar denom = 1;
  for (const Scalar m : squeezes) {
    if (!(m >= Scalar(1))) throw InvalidArgument("chi_pure_multimode: squeezes must be >= 1");
    denom *= (m + Scalar(1) / m) / Scalar(2);
  }
  return Scalar(1) / denom;
}

/// Uhlmann fidelity of two Gaussian states by the general multimode route:
/// CF of sqrt(rho_1) rho_2 sqrt(rho_1) through two operator products, then
/// F = sqrt(L det phi(O)) with L = det((A_1 + A_2)/2)^{-1}.
template <typename D1, typename D2>
typename D1::Scalar fidelity(const Eigen::MatrixBase<D1>& A1, const Eigen::MatrixBase<D2>& A2) {
  using Scalar = typename D1::Scalar;
  using std::max;
  using std::sqrt;
  detail::require_pair(A1, A2, "fidelity");
  const auto root = sqrt_cf(A1);
  const auto sandwich = operator_product(operator_product(root, density_cf(A2)), root);
  const Scalar scale = max(Scalar(1), sandwich.form.cwiseAbs().maxCoeff());
  if (sandwich.form.imag().cwiseAbs().maxCoeff() > Scalar(1e-8) * scale) {
    throw NumericalFailure("fidelity: sandwich operator has a complex quadratic form");
  }
  const Matrix<Scalar> O = sandwich.real_form(Scalar(1e-8) * scale);
  const Scalar L = Scalar(1) / ((A1 + A2) / Scalar(2)).determinant();
  return sqrt(L * det_phi(O));
}

/// One-mode closed form 2 / (sqrt(det(A_1 + A_2) + P) - sqrt(P)),
/// P = (det A_1 - 1)(det A_2 - 1).
template <typename D1, typename D2>
typename D1::Scalar fidelity_one_mode(const Eigen::MatrixBase<D1>& A1,
                                      const Eigen::MatrixBase<D2>& A2) {
  using Scalar = typename D1::Scalar;
  using std::max;
  using std::sqrt;
  if (A1.rows() != 2 || A2.rows() != 2) {
    throw DimensionMismatch("fidelity_one_mode: one-mode (2x2) states required");
  }
  detail::require_pair(A1, A2, "fidelity_one_mode");
  const Scalar P = max(Scalar(0), (A1.determinant() - Scalar(1)) * (A2.determinant() - Scalar(1)));
  return Scalar(2) / (sqrt((A1 + A2).determinant() + P) - sqrt(P));
}

/// Same closed form in (d, m, theta) coordinates.
template <typename Scalar>
Scalar fidelity_one_mode(const OneModeParams<Scalar>& p1, const OneModeParams<Scalar>& p2) {
  using std::sqrt;
  detail::require_params(p1, "fidelity_one_mode");
  detail::require_params(p2, "fidelity_one_mode");
  const Scalar dd = p1.d * p2.d;
  const Scalar F = detail::squeeze_mismatch(p1.theta - p2.theta, p1.m, p2.m);
  const Scalar P = (p1.d * p1.d - Scalar(1)) * (p2.d * p2.d - Scalar(1));
  return Scalar(2) / (sqrt(dd * dd + Scalar(1) + dd * (F - Scalar(2))) - sqrt(P));
}

/// Closed-form fidelity-based nonclassical distance of a one-mode state,
/// 1 for classical states.
template <typename Scalar>
Scalar phi_measure_one_mode(const OneModeParams<Scalar>& p) {
  using std::sqrt;
  detail::require_params(p, "phi_measure_one_mode");
  if (is_classical(p)) return Scalar(1);
  const Scalar r = sqrt(p.d) / p.m + p.m / sqrt(p.d);
  const Scalar t = p.d * p.d - Scalar(1);
  return Scalar(2) / (sqrt(t * t + p.d * p.d * r * r) - t);
}

enum class BoundKind { Fidelity, Overlap };

template <typename Scalar>
struct DeltaBounds {
  Scalar lower = 0;
  Scalar upper = 0;
};

/// Trace-distance bounds implied by a fidelity F or an overlap h:
/// (2(1 - sqrt F), 2 sqrt(1 - F)) and (2(1 - h), 2 sqrt(1 - h^2)).
template <typename Scalar>
DeltaBounds<Scalar> delta_bounds(Scalar value, BoundKind kind) {
  using std::sqrt;
  if (!(value > Scalar(0)) || value > Scalar(1) + Scalar(1e-12)) {
    throw InvalidArgument("delta_bounds: value must lie in (0, 1]");
  }
  const Scalar v = value > Scalar(1) ? Scalar(1) : value;
  if (kind == BoundKind::Fidelity) {
    return {Scalar(2) * (Scalar(1) - sqrt(v)), Scalar(2) * sqrt(Scalar(1) - v)};
  }
  return {Scalar(2) * (Scalar(1) - v), Scalar(2) * sqrt(Scalar(1) - v * v)};
}

template <typename Scalar>
struct MeasureReport {
  std::optional<Scalar> fidelity;
  std::optional<Scalar> holevo_overlap;
  std::optional<Scalar> chi;
  std::optional<Scalar> phi_measure;
  std::optional<DeltaBounds<Scalar>> delta_fidelity;
  std::optional<DeltaBounds<Scalar>> delta_overlap;
};

/// Pairwise similarity report: fidelity, overlap and both bound pairs.
template <typename D1, typename D2>
MeasureReport<typename D1::Scalar> compare_states(const Eigen::MatrixBase<D1>& A1,
                                                  const Eigen::MatrixBase<D2>& A2) {
  using Scalar = typename D1::Scalar;
  MeasureReport<Scalar> r;
  r.fidelity = fidelity(A1, A2);
  r.holevo_overlap = holevo_overlap(A1, A2);
  r.delta_fidelity = delta_bounds(*r.fidelity, BoundKind::Fidelity);
  r.delta_overlap = delta_bounds(*r.holevo_overlap, BoundKind::Overlap);
  return r;
}

/// Nonclassical distances of a single state. One mode uses the closed forms;
/// multimode states get exact values only when classical (both 1) or, for chi,
/// when pure (squeezes read off the spectrum of A).
template <typename Derived>
MeasureReport<typename Derived::Scalar> nonclassicality(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  detail::require_valid_state(A, "nonclassicality");
  MeasureReport<Scalar> r;
  const StateClass cls = classify(A);
  if (A.rows() == 2) {
    const auto p = cov_to_params(A);
    r.chi = chi_one_mode(p);
    r.phi_measure = phi_measure_one_mode(p);
  } else if (cls == StateClass::PureCoherent || cls == StateClass::MixedClassical) {
    r.chi = Scalar(1);
    r.phi_measure = Scalar(1);
  } else if (cls == StateClass::PureNonclassical) {
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(Matrix<Scalar>(A), Eigen::EigenvaluesOnly);
    const Eigen::Index n = A.rows() / 2;
    std::vector<Scalar> squeezes(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      squeezes[k] = std::max(Scalar(1), sqrt(eig.eigenvalues()(2 * n - 1 - k)));
    }
    r.chi = chi_pure_multimode(std::span<const Scalar>(squeezes));
  }
  if (r.chi) r.delta_overlap = delta_bounds(*r.chi, BoundKind::Overlap);
  if (r.phi_measure) r.delta_fidelity = delta_bounds(*r.phi_measure, BoundKind::Fidelity);
  return r;
}

} // namespace gaussnc
