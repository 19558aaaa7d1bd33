#include <doctest.h>

#include <cmath>
#include <vector>

#include "gaussnc/fock_oracle.hpp"
#include "gaussnc/measures.hpp"
#include "test_support.hpp"

using namespace gaussnc;
using gaussnc::testing::max_abs;
using gaussnc::testing::Rng;

namespace {

Eigen::MatrixXd diag2(double a, double b) { return Eigen::Vector2d(a, b).asDiagonal(); }
const Eigen::MatrixXd kVacuum = Eigen::MatrixXd::Identity(2, 2);
const Eigen::MatrixXd kThermal = 3 * Eigen::MatrixXd::Identity(2, 2);

} // namespace

TEST_CASE("holevo overlap examples") {
  CHECK(holevo_overlap(kThermal, kThermal) == doctest::Approx(1).epsilon(1e-14));
  CHECK(holevo_overlap(kVacuum, kThermal) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(holevo_overlap(kVacuum, diag2(4, 0.25)) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK_THROWS_AS(holevo_overlap(kVacuum, Eigen::MatrixXd::Identity(4, 4)), DimensionMismatch);
  CHECK_THROWS_AS(holevo_overlap(kVacuum, diag2(2, 0.4)), InvalidState);
}

TEST_CASE("overlap_one_mode examples") {
  const OneModeParams<double> vac{1, 1, 0};
  CHECK(overlap_one_mode(vac, vac) == doctest::Approx(1));
  CHECK(overlap_one_mode(vac, OneModeParams<double>{3, 1, 0}) == doctest::Approx(2 / std::sqrt(8.0)).epsilon(1e-14));
  CHECK(overlap_one_mode(vac, OneModeParams<double>{1, 2, 0}) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("chi closed forms") {
  CHECK(chi_one_mode(OneModeParams<double>{1, 1, 0}) == 1);
  CHECK(chi_one_mode(OneModeParams<double>{1, 2, 0}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(chi_one_mode(OneModeParams<double>{4, 2, 0}) == 1);
  const std::vector<double> ones{1, 1, 1};
  CHECK(chi_pure_multimode(std::span<const double>(ones)) == 1);
  const std::vector<double> two{2};
  CHECK(chi_pure_multimode(std::span<const double>(two)) == doctest::Approx(0.8));
  const std::vector<double> pair{2, 3};
  CHECK(chi_pure_multimode(std::span<const double>(pair)) == doctest::Approx(0.48).epsilon(1e-14));
}

TEST_CASE("chi_pure_multimode agrees with holevo_overlap against the vacuum") {
  const std::vector<double> m{2, 3};
  const Eigen::MatrixXd A = Eigen::Vector4d(4, 9, 0.25, 1.0 / 9).asDiagonal();
  CHECK(holevo_overlap(Eigen::MatrixXd(Eigen::MatrixXd::Identity(4, 4)), A) ==
        doctest::Approx(chi_pure_multimode(std::span<const double>(m))).epsilon(1e-12));
}

TEST_CASE("fidelity examples") {
  Rng rng(41);
  const Eigen::MatrixXd A = gaussnc::testing::random_state(2, rng);
  CHECK(fidelity(A, A) == doctest::Approx(1).epsilon(1e-9));
  CHECK(fidelity(kVacuum, kThermal) == doctest::Approx(0.5).epsilon(1e-14));
  const double expected = 2 / (std::sqrt(52.0) - std::sqrt(24.0));
  CHECK(fidelity(diag2(4, 1), kThermal) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(fidelity_one_mode(diag2(4, 1), kThermal) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(fidelity_one_mode(kThermal, kThermal) == doctest::Approx(1).epsilon(1e-14));
  CHECK(fidelity_one_mode(kVacuum, kThermal) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(fidelity_one_mode(Eigen::MatrixXd::Identity(4, 4), Eigen::MatrixXd::Identity(4, 4)),
                  DimensionMismatch);
}

TEST_CASE("diag(4,1) vs diag(1,4) against the Fock oracle") {
  const double analytic = fidelity_one_mode(diag2(4, 1), diag2(1, 4));
  // det(A1 + A2) = 25, P = 9: F = 2 / (sqrt(34) - 3).
  CHECK(analytic == doctest::Approx(2 / (std::sqrt(34.0) - 3)).epsilon(1e-14));
  FockOptions options;
  options.deficit_cap = 1e-6;
  const auto r1 = build_one_mode(cov_to_params(diag2(4, 1)), 80, options);
  const auto r2 = build_one_mode(cov_to_params(diag2(1, 4)), 80, options);
  CHECK(std::abs(oracle_fidelity(r1, r2) - analytic) < 1e-6);
}

TEST_CASE("one-mode closed forms agree with the general routes") {
  Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    const auto p1 = gaussnc::testing::random_params(rng, 5, 3);
    const auto p2 = gaussnc::testing::random_params(rng, 5, 3);
    const Eigen::MatrixXd A1 = params_to_cov(p1);
    const Eigen::MatrixXd A2 = params_to_cov(p2);
    const double f = fidelity_one_mode(A1, A2);
    CHECK(std::abs(fidelity(A1, A2) - f) <= 1e-9);
    CHECK(std::abs(fidelity_one_mode(p1, p2) - f) <= 1e-12);
    CHECK(std::abs(holevo_overlap(A1, A2) - overlap_one_mode(p1, p2)) <= 1e-12);
  }
}

TEST_CASE("pure states: chi equals phi") {
  for (const double m : {1.0, 1.3, 2.0, 5.0}) {
    const OneModeParams<double> p{1, m, 0};
    CHECK(chi_one_mode(p) == phi_measure_one_mode(p));
  }
}

TEST_CASE("phi measure examples") {
  CHECK(phi_measure_one_mode(OneModeParams<double>{1, 1, 0}) == 1);
  CHECK(phi_measure_one_mode(OneModeParams<double>{1, 2, 0}) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(phi_measure_one_mode(OneModeParams<double>{2, 2, 0}) ==
        doctest::Approx(2 / (std::sqrt(27.0) - 3)).epsilon(1e-14));
}

TEST_CASE("axioms on Gaussian states") {
  Rng rng(43);
  for (Eigen::Index n = 1; n <= 2; ++n) {
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd A = gaussnc::testing::random_state(n, rng);
      const Eigen::MatrixXd B = gaussnc::testing::random_state(n, rng);
      const double f = fidelity(A, B);
      CHECK(std::abs(f - fidelity(B, A)) <= 1e-9);
      CHECK(f > 0);
      CHECK(f < 1 - 1e-9);
      CHECK(std::abs(fidelity(A, A) - 1) <= 1e-9);
      const Eigen::MatrixXd S = gaussnc::testing::random_symplectic(n, rng, 1.5);
      Eigen::MatrixXd SA = S.transpose() * A * S;
      Eigen::MatrixXd SB = S.transpose() * B * S;
      SA = (SA + SA.transpose()) / 2;
      SB = (SB + SB.transpose()) / 2;
      CHECK(std::abs(fidelity(SA, SB) - f) <= 1e-9);
      CHECK(std::abs(holevo_overlap(SA, SB) - holevo_overlap(A, B)) <= 1e-9);
    }
  }
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd A1 = gaussnc::testing::random_state(1, rng);
    const Eigen::MatrixXd A2 = gaussnc::testing::random_state(1, rng);
    const Eigen::MatrixXd B1 = gaussnc::testing::random_state(1, rng);
    const Eigen::MatrixXd B2 = gaussnc::testing::random_state(1, rng);
    const double joint = fidelity(gaussnc::testing::direct_sum(A1, B1), gaussnc::testing::direct_sum(A2, B2));
    CHECK(std::abs(joint - fidelity(A1, A2) * fidelity(B1, B2)) <= 1e-9);
    const double h = holevo_overlap(gaussnc::testing::direct_sum(A1, B1), gaussnc::testing::direct_sum(A2, B2));
    CHECK(std::abs(h - holevo_overlap(A1, A2) * holevo_overlap(B1, B2)) <= 1e-9);
  }
}

TEST_CASE("overlap squared versus fidelity is recorded, not asserted") {
  Rng rng(44);
  int below = 0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::MatrixXd A = gaussnc::testing::random_state(1, rng);
    const Eigen::MatrixXd B = gaussnc::testing::random_state(1, rng);
    const double h = holevo_overlap(A, B);
    if (h * h <= fidelity(A, B) + 1e-12) ++below;
  }
  MESSAGE("h^2 <= F on " << below << " of 200 random pairs");
}

TEST_CASE("delta bounds") {
  auto b = delta_bounds(1.0, BoundKind::Fidelity);
  CHECK(b.lower == 0);
  CHECK(b.upper == 0);
  b = delta_bounds(0.5, BoundKind::Fidelity);
  CHECK(b.lower == doctest::Approx(0.585786).epsilon(1e-6));
  CHECK(b.upper == doctest::Approx(1.414214).epsilon(1e-6));
  b = delta_bounds(0.707107, BoundKind::Overlap);
  CHECK(b.lower == doctest::Approx(0.585786).epsilon(1e-6));
  CHECK(b.upper == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK_THROWS_AS(delta_bounds(0.0, BoundKind::Fidelity), InvalidArgument);
  CHECK_THROWS_AS(delta_bounds(1.5, BoundKind::Overlap), InvalidArgument);
}

TEST_CASE("reports") {
  const auto r = nonclassicality(diag2(4, 0.25));
  REQUIRE(r.chi);
  REQUIRE(r.phi_measure);
  CHECK(*r.chi == doctest::Approx(0.8));
  CHECK(*r.phi_measure == doctest::Approx(0.8));
  CHECK(r.delta_fidelity->lower == doctest::Approx(2 * (1 - std::sqrt(0.8))));
  CHECK(r.delta_fidelity->upper == doctest::Approx(2 * std::sqrt(0.2)));

  const auto classical = nonclassicality(Eigen::MatrixXd(3 * Eigen::MatrixXd::Identity(4, 4)));
  CHECK(*classical.chi == 1);
  CHECK(*classical.phi_measure == 1);

  const Eigen::MatrixXd pure2 = Eigen::Vector4d(4, 9, 0.25, 1.0 / 9).asDiagonal();
  const auto p2 = nonclassicality(pure2);
  CHECK(*p2.chi == doctest::Approx(0.48));
  CHECK_FALSE(p2.phi_measure);

  const auto cmp = compare_states(kVacuum, kThermal);
  CHECK(*cmp.fidelity == doctest::Approx(0.5));
  CHECK(*cmp.holevo_overlap == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("long double instantiation") {
  const Matrix<long double> A = Matrix<long double>::Identity(2, 2);
  const Matrix<long double> B = 3 * Matrix<long double>::Identity(2, 2);
  CHECK(std::abs(fidelity(A, B) - 0.5L) < 1e-15L);
  CHECK(std::abs(holevo_overlap(A, B) - 1 / std::sqrt(2.0L)) < 1e-15L);
}
