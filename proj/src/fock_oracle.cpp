#include "gaussnc/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "gaussnc/errors.hpp"

namespace gaussnc {

namespace {

Eigen::MatrixXd annihilation(Eigen::Index dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

void require_same_dimension(const FockDensityMatrix& r1, const FockDensityMatrix& r2,
                            const char* what) {
  if (r1.dimension() != r2.dimension()) {
    throw DimensionMismatch(std::string(what) + ": truncation dimensions differ");
  }
}

// Eigenvalues within the eigensolver's roundoff floor 4 eps max|w| are
// zeroed, so that rank-deficient inputs do not pick up sqrt(eps) noise.
Eigen::VectorXd floored(const Eigen::VectorXd& w, double clip, const char* what) {
  if (w.minCoeff() < -clip) {
    throw NumericalFailure(std::string(what) + ": eigenvalue " + std::to_string(w.minCoeff()) +
                           " below clipping threshold");
  }
  const double floor = 4 * std::numeric_limits<double>::epsilon() * w.cwiseAbs().maxCoeff();
  return w.unaryExpr([floor](double x) { return x > floor ? x : 0.0; });
}

Eigen::VectorXd clipped_eigenvalues(const Eigen::MatrixXcd& H, double clip) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("fock oracle: eigensolver failed");
  return floored(eig.eigenvalues(), clip, "fock oracle");
}

} // namespace

FockDensityMatrix build_one_mode(const OneModeParams<double>& p, Eigen::Index N,
                                 const FockOptions& options) {
  if (!(p.d >= 1.0)) throw InvalidState("build_one_mode: d must be >= 1");
  if (!(p.m >= 1.0)) throw InvalidArgument("build_one_mode: m must be >= 1");
  if (N < 2) throw InvalidArgument("build_one_mode: truncation N must be >= 2");
  if (options.padding_factor < 1) throw InvalidArgument("build_one_mode: padding factor < 1");

  const Eigen::Index dim = options.padding_factor * N;
  const Eigen::MatrixXd a = annihilation(dim);
  const Eigen::MatrixXd a2 = a * a;
  const double r = std::log(p.m);
  const Eigen::MatrixXd generator = 0.5 * r * (a2 - a2.transpose());
  const Eigen::MatrixXd squeeze = generator.exp();

  const double nbar = (p.d - 1.0) / 2.0;
  Eigen::VectorXd thermal = Eigen::VectorXd::Zero(dim);
  if (nbar == 0.0) {
    thermal(0) = 1.0;
  } else {
    const double q = nbar / (nbar + 1.0);
    double w = 1.0 / (nbar + 1.0);
    for (Eigen::Index k = 0; k < dim; ++k, w *= q) thermal(k) = w;
  }
  const Eigen::MatrixXd top = squeeze.topRows(N);
  const Eigen::MatrixXd real_rho = top * thermal.asDiagonal() * top.transpose();

  FockDensityMatrix out;
  out.rho.resize(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = 0; k < N; ++k) {
      out.rho(j, k) = real_rho(j, k) * std::polar(1.0, -p.theta * static_cast<double>(j - k));
    }
  }
  const double trace = out.rho.trace().real();
  out.trace_deficit = std::max(0.0, 1.0 - trace);
  if (out.trace_deficit > options.deficit_cap) {
    throw TruncationTooSmall("build_one_mode: truncation N=" + std::to_string(N) +
                             " loses trace " + std::to_string(out.trace_deficit));
  }
  out.rho /= trace;
  out.rho = (0.5 * (out.rho + out.rho.adjoint())).eval();
  return out;
}

FockDensityMatrix mix(double mu, const FockDensityMatrix& r1, const FockDensityMatrix& r2) {
  require_same_dimension(r1, r2, "mix");
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("mix: weight must lie in [0, 1]");
  FockDensityMatrix out;
  out.rho = mu * r1.rho + (1.0 - mu) * r2.rho;
  out.trace_deficit = mu * r1.trace_deficit + (1.0 - mu) * r2.trace_deficit;
  return out;
}

std::complex<double> oracle_cf(const FockDensityMatrix& r, const Eigen::Vector2d& u,
                               int padding_factor) {
  const Eigen::Index N = r.dimension();
  const Eigen::Index dim = std::max(1, padding_factor) * N;
  const Eigen::MatrixXcd a = annihilation(dim).cast<std::complex<double>>();
  const Eigen::MatrixXcd ad = a.adjoint();
  const double s = 1.0 / std::sqrt(2.0);
  // i(xi P + eta Q) with Q = (a + a^dag)/sqrt2, P = (a - a^dag)/(i sqrt2).
  const Eigen::MatrixXcd generator =
      (u(0) * s) * (a - ad) + std::complex<double>(0.0, u(1) * s) * (a + ad);
  const Eigen::MatrixXcd V = generator.exp();
  return (r.rho * V.topLeftCorner(N, N)).trace();
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& H, double clip) {
  const Eigen::MatrixXcd sym = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalFailure("hermitian_sqrt: eigensolver failed");
  const Eigen::VectorXcd root =
      floored(eig.eigenvalues(), clip, "hermitian_sqrt").cwiseSqrt().cast<std::complex<double>>();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

double oracle_fidelity(const FockDensityMatrix& r1, const FockDensityMatrix& r2, double clip) {
  require_same_dimension(r1, r2, "oracle_fidelity");
  const Eigen::MatrixXcd root = hermitian_sqrt(r1.rho, clip);
  const Eigen::MatrixXcd sandwich = root * r2.rho * root;
  const double t = clipped_eigenvalues(0.5 * (sandwich + sandwich.adjoint()), clip).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double oracle_overlap(const FockDensityMatrix& r1, const FockDensityMatrix& r2, double clip) {
  require_same_dimension(r1, r2, "oracle_overlap");
  const std::complex<double> t =
      (hermitian_sqrt(r1.rho, clip) * hermitian_sqrt(r2.rho, clip)).trace();
  if (std::abs(t.imag()) > 1e-8) throw NumericalFailure("oracle_overlap: trace is not real");
  return t.real();
}

double oracle_trace_distance(const FockDensityMatrix& r1, const FockDensityMatrix& r2) {
  require_same_dimension(r1, r2, "oracle_trace_distance");
  const Eigen::MatrixXcd diff = r1.rho - r2.rho;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (diff + diff.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("oracle_trace_distance: eigensolver failed");
  return std::min(2.0, eig.eigenvalues().cwiseAbs().sum());
}

double oracle_trace_sqrt(const FockDensityMatrix& r, double clip) {
  return clipped_eigenvalues(r.rho, clip).cwiseSqrt().sum();
}

double oracle_expectation(const FockDensityMatrix& r, const Eigen::VectorXcd& psi) {
  if (psi.size() != r.dimension()) throw DimensionMismatch("oracle_expectation: vector length");
  const std::complex<double> v = psi.dot(r.rho * psi);
  if (std::abs(v.imag()) > 1e-8) throw NumericalFailure("oracle_expectation: value is not real");
  return v.real();
}

} // namespace gaussnc
