#include "gaussnc/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "gaussnc/errors.hpp"
#include "gaussnc/measures.hpp"
#include "gaussnc/states.hpp"

namespace gaussnc {

namespace {

using Params = OneModeParams<double>;
using Objective = std::function<double(const Params&)>;
using Point = std::array<double, 3>;

constexpr double kPi = std::numbers::pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

// Unconstrained coordinates x -> feasible (d, m, theta):
// d = 1 + x0^2, m = 1 + sin^2(x1) (sqrt(d) - 1), theta = x2.
Params to_params(const Point& x) {
  const double d = 1.0 + x[0] * x[0];
  const double s = std::sin(x[1]);
  return {d, 1.0 + s * s * (std::sqrt(d) - 1.0), wrap_angle(x[2])};
}

Point to_point(const Params& p) {
  const double span = std::sqrt(p.d) - 1.0;
  const double frac = span > 0 ? std::clamp((p.m - 1.0) / span, 0.0, 1.0) : 0.0;
  return {std::sqrt(p.d - 1.0), std::asin(std::sqrt(frac)), p.theta};
}

double angle_gap(double a, double b) {
  const double t = wrap_angle(a - b);
  return std::min(t, kPi - t);
}

struct Candidate {
  double value = -1;
  Params p;
};

class Search {
 public:
  Search(Objective f, std::size_t budget, double target_theta)
      : f_(std::move(f)), budget_(budget), target_theta_(target_theta) {}

  bool exhausted() const { return used_ >= budget_; }
  std::size_t used() const { return used_; }
  std::size_t remaining() const { return budget_ > used_ ? budget_ - used_ : 0; }

  double eval(const Params& p) {
    ++used_;
    const double v = f_(p);
    consider({v, p});
    return v;
  }

  // Larger value wins; ties go to the smaller angle to the target's squeeze axis.
  bool better(const Candidate& a, const Candidate& b) const {
    if (a.value > b.value + 1e-15) return true;
    if (a.value < b.value - 1e-15) return false;
    return angle_gap(a.p.theta, target_theta_) < angle_gap(b.p.theta, target_theta_) - 1e-12;
  }

  const Candidate& best() const { return best_; }

 private:
  void consider(const Candidate& c) {
    if (best_.value < 0 || better(c, best_)) best_ = c;
  }

  Objective f_;
  std::size_t budget_;
  std::size_t used_ = 0;
  double target_theta_;
  Candidate best_;
};

struct SimplexOutcome {
  Candidate best;
  bool converged = false;
};

// Nelder-Mead maximization in the unconstrained coordinates.
SimplexOutcome nelder_mead(Search& search, const Point& start, std::size_t cap) {
  constexpr int kDim = 3;
  constexpr double kFTol = 1e-15;
  constexpr double kXTol = 1e-10;
  const std::size_t stop_at = search.used() + cap;

  std::array<Point, kDim + 1> x;
  std::array<double, kDim + 1> f;
  x[0] = start;
  for (int i = 0; i < kDim; ++i) {
    x[i + 1] = start;
    x[i + 1][i] += 0.15;
  }
  for (int i = 0; i <= kDim; ++i) f[i] = search.eval(to_params(x[i]));

  auto over_budget = [&] { return search.exhausted() || search.used() >= stop_at; };
  bool converged = false;
  while (!over_budget()) {
    std::array<int, kDim + 1> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] > f[b]; });
    const int hi = order[0];
    const int lo = order[kDim];
    const int second_lo = order[kDim - 1];

    double size = 0;
    for (int i = 0; i <= kDim; ++i)
      for (int k = 0; k < kDim; ++k) size = std::max(size, std::abs(x[i][k] - x[hi][k]));
    if (f[hi] - f[lo] <= kFTol && size <= kXTol) {
      converged = true;
      break;
    }
    if (f[hi] - f[lo] <= kFTol * 1e-3 && size <= 1e-6) {
      converged = true;
      break;
    }

    Point centroid{0, 0, 0};
    for (int i = 0; i <= kDim; ++i) {
      if (i == lo) continue;
      for (int k = 0; k < kDim; ++k) centroid[k] += x[i][k] / kDim;
    }
    auto along = [&](double t) {
      Point p;
      for (int k = 0; k < kDim; ++k) p[k] = centroid[k] + t * (x[lo][k] - centroid[k]);
      return p;
    };

    const Point xr = along(-1.0);
    const double fr = search.eval(to_params(xr));
    if (fr > f[hi]) {
      const Point xe = along(-2.0);
      const double fe = search.eval(to_params(xe));
      if (fe > fr) {
        x[lo] = xe;
        f[lo] = fe;
      } else {
        x[lo] = xr;
        f[lo] = fr;
      }
      continue;
    }
    if (fr > f[second_lo]) {
      x[lo] = xr;
      f[lo] = fr;
      continue;
    }
    const bool outside = fr > f[lo];
    const Point xc = along(outside ? -0.5 : 0.5);
    const double fc = search.eval(to_params(xc));
    if (fc > std::max(fr, f[lo]) || (!outside && fc > f[lo])) {
      x[lo] = xc;
      f[lo] = fc;
      continue;
    }
    for (int i = 0; i <= kDim; ++i) {
      if (i == hi) continue;
      for (int k = 0; k < kDim; ++k) x[i][k] = x[hi][k] + 0.5 * (x[i][k] - x[hi][k]);
      f[i] = search.eval(to_params(x[i]));
    }
  }

  int best = 0;
  for (int i = 1; i <= kDim; ++i)
    if (f[i] > f[best]) best = i;
  return {{f[best], to_params(x[best])}, converged};
}

SupResult maximize(const Objective& objective, const Params& target, std::size_t budget,
                   std::uint64_t seed) {
  const double d_max = std::max(4.0, 2.0 * target.d * target.m * target.m);
  Search search(objective, budget, target.theta);

  // Coarse grid over d1 (geometric), fraction of the feasible m1 range, and the
  // two stationary squeeze orientations.
  constexpr int kGridD = 48;
  constexpr std::array<double, 5> kFractions{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Candidate> seeds;
  for (int i = 0; i < kGridD && !search.exhausted(); ++i) {
    const double d = std::pow(d_max, static_cast<double>(i) / (kGridD - 1));
    for (const double frac : kFractions) {
      for (const double shift : {0.0, kPi / 2}) {
        if (search.exhausted()) break;
        const Params p{d, 1.0 + frac * (std::sqrt(d) - 1.0), wrap_angle(target.theta + shift)};
        seeds.push_back({search.eval(p), p});
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 64 && !search.exhausted(); ++i) {
    const double d = 1.0 + (d_max - 1.0) * unit(rng);
    const Params p{d, 1.0 + unit(rng) * (std::sqrt(d) - 1.0), kPi * unit(rng)};
    seeds.push_back({search.eval(p), p});
  }

  std::stable_sort(seeds.begin(), seeds.end(),
                   [&](const Candidate& a, const Candidate& b) { return search.better(a, b); });
  constexpr std::size_t kStarts = 4;
  bool converged = false;
  Candidate refined;
  const std::size_t starts = std::min(kStarts, seeds.size());
  for (std::size_t s = 0; s < starts && !search.exhausted(); ++s) {
    const std::size_t cap = search.remaining() / (starts - s);
    const auto outcome = nelder_mead(search, to_point(seeds[s].p), cap);
    if (refined.value < 0 || search.better(outcome.best, refined)) {
      refined = outcome.best;
      converged = outcome.converged;
    }
  }

  SupResult result;
  result.argmax = search.best().p;
  result.argmax.theta = wrap_angle(result.argmax.theta);
  if (kPi - result.argmax.theta < 1e-9 || result.argmax.m - 1.0 <= 1e-12) result.argmax.theta = 0;
  result.value = objective(result.argmax);
  result.iterations = search.used();
  result.converged = converged && refined.value >= search.best().value - 1e-12;
  return result;
}

Params one_mode_target(const Eigen::MatrixXd& target, const char* what) {
  if (target.rows() != 2 || target.cols() != 2) {
    throw DimensionMismatch(std::string(what) + ": one-mode (2x2) target required");
  }
  return cov_to_params(target);
}

SupResult classical_shortcut(const Params& target) {
  SupResult r;
  r.value = 1.0;
  r.argmax = target;
  r.iterations = 0;
  r.converged = true;
  return r;
}

} // namespace

SupResult sup_fidelity_classical(const Eigen::MatrixXd& target, std::size_t budget,
                                 std::uint64_t seed) {
  const Params t = one_mode_target(target, "sup_fidelity_classical");
  if (classify(target) == StateClass::PureCoherent ||
      classify(target) == StateClass::MixedClassical) {
    return classical_shortcut(t);
  }
  const Objective f = [&target](const Params& p) {
    return fidelity_one_mode(params_to_cov(p), target);
  };
  return maximize(f, t, budget, seed);
}

SupResult sup_overlap_classical(const Eigen::MatrixXd& target, std::size_t budget,
                                std::uint64_t seed) {
  const Params t = one_mode_target(target, "sup_overlap_classical");
  if (classify(target) == StateClass::PureCoherent ||
      classify(target) == StateClass::MixedClassical) {
    return classical_shortcut(t);
  }
  const Objective f = [t](const Params& p) { return overlap_one_mode(p, t); };
  return maximize(f, t, budget, seed);
}

LocalMaxReport local_max_check_multimode(std::span<const double> squeezes, double scale,
                                         std::uint64_t seed, int trials) {
  const auto n = static_cast<Eigen::Index>(squeezes.size());
  if (n < 1) throw InvalidArgument("local_max_check_multimode: empty squeeze list");
  if (!(scale > 0)) throw InvalidArgument("local_max_check_multimode: scale must be positive");
  Eigen::VectorXd diag(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = squeezes[static_cast<std::size_t>(k)];
    if (!(m >= 1.0)) throw InvalidArgument("local_max_check_multimode: squeezes must be >= 1");
    diag(k) = m * m;
    diag(n + k) = 1.0 / (m * m);
  }
  const Eigen::MatrixXd target = diag.asDiagonal();
  const Eigen::MatrixXd vacuum = Eigen::MatrixXd::Identity(2 * n, 2 * n);

  LocalMaxReport report;
  report.value = holevo_overlap(vacuum, target);
  report.best_perturbed = 0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd thermal(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) thermal(k) = thermal(n + k) = 1.0 + scale * std::abs(normal(rng));

    Eigen::MatrixXcd H(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) H(i, j) = {normal(rng), normal(rng)};
    const Eigen::MatrixXcd skew = 0.5 * scale * (H - H.adjoint());
    const Eigen::MatrixXcd U = skew.exp();
    Eigen::MatrixXd O(2 * n, 2 * n);
    O << U.real(), U.imag(), -U.imag(), U.real();

    const Eigen::MatrixXd candidate = O.transpose() * thermal.asDiagonal() * O;
    const Eigen::MatrixXd sym = 0.5 * (candidate + candidate.transpose());
    report.best_perturbed = std::max(report.best_perturbed, holevo_overlap(sym, target));
  }
  report.is_local_max = report.best_perturbed <= report.value + 1e-12;
  return report;
}

} // namespace gaussnc
