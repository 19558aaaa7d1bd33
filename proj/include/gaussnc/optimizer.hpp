#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "gaussnc/types.hpp"

namespace gaussnc {

/// Best classical one-mode state found for a similarity measure.
struct SupResult {
  double value = 0;
  OneModeParams<double> argmax;
  std::size_t iterations = 0;  // objective evaluations spent
  bool converged = false;
};

/// sup over classical one-mode states (d1 >= m1^2, m1 >= 1) of the fidelity
/// with `target`. Classical targets short-circuit to value 1, argmax = target.
SupResult sup_fidelity_classical(const Eigen::MatrixXd& target, std::size_t budget = 20000,
                                 std::uint64_t seed = 0);

/// Same search for the Holevo overlap.
SupResult sup_overlap_classical(const Eigen::MatrixXd& target, std::size_t budget = 20000,
                                std::uint64_t seed = 0);

struct LocalMaxReport {
  bool is_local_max = false;
  double value = 0;           // overlap at the conjectured maximizer (vacuum)
  double best_perturbed = 0;  // largest overlap among perturbed candidates
};

/// Perturbs the conjectured maximizer D1 = I, O1 = O2 (= I) of the overlap with
/// the pure squeezed target diag(M^2, M^-2) by `trials` random feasible
/// (D1 >= I, O1 orthogonal symplectic) moves of size `scale`.
LocalMaxReport local_max_check_multimode(std::span<const double> squeezes, double scale,
                                         std::uint64_t seed = 0, int trials = 50);

} // namespace gaussnc
