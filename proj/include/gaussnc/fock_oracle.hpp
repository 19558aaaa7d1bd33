#pragma once

#include <complex>

#include <Eigen/Dense>

#include "gaussnc/types.hpp"

namespace gaussnc {

struct FockOptions {
  double deficit_cap = 1e-8;   // largest accepted 1 - Tr(rho) after cropping
  int padding_factor = 2;      // operators are built at padding_factor * N, then cropped
  double clip = 1e-10;         // negative eigenvalues above -clip are set to zero
};

/// Truncated number-basis density matrix, renormalized to unit trace.
struct FockDensityMatrix {
  Eigen::MatrixXcd rho;
  double trace_deficit = 0;  // trace lost to truncation before renormalization

  Eigen::Index dimension() const { return rho.rows(); }
};

/// R(theta) S(r) rho_th S(r)^dag R(theta)^dag with nbar = (d - 1)/2, r = ln m.
/// Throws TruncationTooSmall when the cropped trace deficit exceeds the cap.
FockDensityMatrix build_one_mode(const OneModeParams<double>& p, Eigen::Index N,
                                 const FockOptions& options = {});

/// mu r1 + (1 - mu) r2.
FockDensityMatrix mix(double mu, const FockDensityMatrix& r1, const FockDensityMatrix& r2);

/// Tr(rho V(u)), V(u) = exp(i(xi P + eta Q)) for u = (xi, eta).
std::complex<double> oracle_cf(const FockDensityMatrix& r, const Eigen::Vector2d& u,
                               int padding_factor = 2);

/// Uhlmann fidelity [Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2, clipped to [0, 1].
double oracle_fidelity(const FockDensityMatrix& r1, const FockDensityMatrix& r2,
                       double clip = 1e-10);

/// Tr sqrt(r1) sqrt(r2).
double oracle_overlap(const FockDensityMatrix& r1, const FockDensityMatrix& r2,
                      double clip = 1e-10);

/// ||r1 - r2||_1.
double oracle_trace_distance(const FockDensityMatrix& r1, const FockDensityMatrix& r2);

/// Tr sqrt(r).
double oracle_trace_sqrt(const FockDensityMatrix& r, double clip = 1e-10);

/// <psi| r |psi>.
double oracle_expectation(const FockDensityMatrix& r, const Eigen::VectorXcd& psi);

/// Positive square root of a Hermitian PSD matrix; eigenvalues below -clip throw,
/// those within roundoff of zero are treated as zero.
Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& H, double clip = 1e-10);

} // namespace gaussnc
