#include <doctest.h>

#include <cmath>

#include "gaussnc/fock_oracle.hpp"
#include "gaussnc/sqrt_map.hpp"
#include "test_support.hpp"

using namespace gaussnc;
using gaussnc::testing::max_abs;
using gaussnc::testing::Rng;

namespace {

double fixed_point_residual(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd phi = phi_of(A);
  const Eigen::MatrixXd J = standard_form(A.rows() / 2);
  return max_abs(phi - J * phi.inverse() * J - 2 * A);
}

} // namespace

TEST_CASE("phi of pure states is the identity map, bit for bit") {
  Rng rng(31);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  CHECK((phi_of(I).array() == I.array()).all());
  for (Eigen::Index n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd P = gaussnc::testing::random_pure(n, rng);
    CHECK((phi_of(P).array() == P.array()).all());
  }
}

TEST_CASE("phi of thermal and diag(4, 1)") {
  const double r = 3 + std::sqrt(8.0);
  const Eigen::MatrixXd T = 3 * Eigen::MatrixXd::Identity(2, 2);
  CHECK(max_abs(phi_of(T) - r * Eigen::MatrixXd::Identity(2, 2)) < 1e-12);

  const Eigen::MatrixXd A = Eigen::Vector2d(4, 1).asDiagonal();
  const double s = 2 + std::sqrt(3.0);
  const Eigen::MatrixXd expected = Eigen::Vector2d(2 * s, s / 2).asDiagonal();
  CHECK(max_abs(phi_of(A) - expected) < 1e-12);
  CHECK(fixed_point_residual(A) < 1e-12);
}

TEST_CASE("fixed-point equation and route equivalence on random states") {
  Rng rng(32);
  for (Eigen::Index n = 1; n <= 3; ++n) {
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd A = gaussnc::testing::random_state(n, rng);
      CHECK(fixed_point_residual(A) <= 1e-9);
      CHECK(max_abs(phi_of(A) - phi_closed_form(A)) <= 1e-9);
    }
  }
}

TEST_CASE("phi is covariant under symplectic congruence") {
  Rng rng(33);
  for (Eigen::Index n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd A = gaussnc::testing::random_state(n, rng);
    const Eigen::MatrixXd S = gaussnc::testing::random_symplectic(n, rng, 1.5);
    Eigen::MatrixXd B = S.transpose() * A * S;
    B = (B + B.transpose()) / 2;
    const Eigen::MatrixXd expected = S.transpose() * phi_of(A) * S;
    CHECK(max_abs(phi_of(B) - expected) < 1e-8);
    CHECK(max_abs(phi_closed_form(B) - expected) < 1e-8);
  }
}

TEST_CASE("spectrum of phi is d + sqrt(d^2 - 1)") {
  Rng rng(34);
  const Eigen::MatrixXd A = gaussnc::testing::random_state(3, rng);
  const Eigen::VectorXd d = symplectic_spectrum(A);
  const Eigen::VectorXd f = symplectic_spectrum(phi_of(A));
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK(f(k) == doctest::Approx(d(k) + std::sqrt(d(k) * d(k) - 1)).epsilon(1e-10));
    CHECK(f(k) >= d(k));
  }
}

TEST_CASE("det_phi") {
  const double r = 3 + std::sqrt(8.0);
  CHECK(det_phi(Eigen::MatrixXd::Identity(2, 2)) == 1);
  CHECK(det_phi(Eigen::MatrixXd(3 * Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(r * r).epsilon(1e-14));
  CHECK(det_phi(Eigen::MatrixXd(3 * Eigen::MatrixXd::Identity(4, 4))) ==
        doctest::Approx(r * r * r * r).epsilon(1e-13));
  Rng rng(35);
  const Eigen::MatrixXd A = gaussnc::testing::random_state(2, rng);
  CHECK(det_phi(A) == doctest::Approx(phi_of(A).determinant()).epsilon(1e-9));
}

TEST_CASE("sqrt_cf") {
  const auto vac = sqrt_cf(Eigen::MatrixXd::Identity(2, 2));
  CHECK(vac.scale.real() == 1);
  const auto th = sqrt_cf(Eigen::MatrixXd(3 * Eigen::MatrixXd::Identity(2, 2)));
  CHECK(th.scale.real() == doctest::Approx(std::sqrt(2.0) + 1).epsilon(1e-14));

  Rng rng(36);
  for (Eigen::Index n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd A = gaussnc::testing::random_state(n, rng);
    const auto root = sqrt_cf(A);
    const auto self = operator_product(root, root);
    CHECK(std::abs(self.scale - 1.0) < 1e-10);
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd u(2 * n);
      for (Eigen::Index i = 0; i < 2 * n; ++i) u(i) = gaussnc::testing::uniform(rng, -1, 1);
      CHECK(std::abs(self.eval(u) - cf_eval(A, u)) < 1e-10);
    }
  }
}

TEST_CASE("sqrt_cf matches the oracle's square root") {
  Rng rng(37);
  for (int t = 0; t < 3; ++t) {
    const auto p = gaussnc::testing::random_params(rng, 3, 2);
    const auto root = sqrt_cf(params_to_cov(p));
    FockOptions options;
    options.deficit_cap = 1e-6;
    const auto r = build_one_mode(p, 80, options);
    FockDensityMatrix sq;
    sq.rho = hermitian_sqrt(r.rho);
    for (int k = 0; k < 10; ++k) {
      const Eigen::Vector2d u(gaussnc::testing::uniform(rng, -1, 1), gaussnc::testing::uniform(rng, -1, 1));
      CHECK(std::abs(root.eval(u) - oracle_cf(sq, u)) < 1e-4);
    }
  }
}

TEST_CASE("invalid states are rejected") {
  const Eigen::MatrixXd bad = Eigen::Vector2d(2, 0.4).asDiagonal();
  CHECK_THROWS_AS(phi_of(bad), InvalidState);
  CHECK_THROWS_AS(det_phi(bad), InvalidState);
  CHECK_THROWS_AS(sqrt_cf(bad), InvalidState);
}

TEST_CASE("long double instantiation") {
  const Matrix<long double> T = 3 * Matrix<long double>::Identity(2, 2);
  const long double r = 3 + std::sqrt(8.0L);
  CHECK(std::abs(phi_of(T)(0, 0) - r) < 1e-15L);
}
