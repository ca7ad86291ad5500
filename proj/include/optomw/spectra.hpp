#pragma once

#include <complex>

#include <Eigen/Core>

#include "optomw/quadrature.hpp"
#include "optomw/steadystate.hpp"

namespace optomw {

/// Temporal output modes selected by the causal filters
/// g_j(t) = sqrt(2/tau) theta(t) exp(-(1/tau + i Omega_j) t).
struct OutputWindow {
  double tau = 0.0;             ///< filter time constant [s]
  double omega_center_c = 0.0;  ///< optical central frequency [rad/s], drive frame
  double omega_center_w = 0.0;  ///< microwave central frequency [rad/s], drive frame

  double epsilon(double omega_m) const { return tau * omega_m; }

  /// epsilon = tau omega_m; centers given in units of omega_m.
  static OutputWindow from_epsilon(double epsilon, double omega_m, double center_c_rel,
                                   double center_w_rel);
};

/// Frequency response G(w) = \int g(t) e^{i w t} dt of the exponential filter:
/// sqrt(2/tau) / (1/tau - i (w - Omega)). \int |G|^2 dw / 2pi = 1.
std::complex<double> filter_transfer(double omega, double tau, double omega_center);

struct SpectralOptions {
  double rel_tol = 1e-8;
  double cutoff_factor = 40.0;  ///< Lambda = factor * max(omega_m, |Delta_j|, |Omega_j|)
  int max_intervals = 20000;
};

/// Stationary covariance of (dq, dp, X_w^out, Y_w^out, X_c^out, Y_c^out),
/// vacuum variance 1/2.
struct OutputCM {
  Matrix6d matrix = Matrix6d::Zero();
  double error_estimate = 0.0;  ///< max entry-wise quadrature error bound
  double cutoff = 0.0;          ///< Lambda [rad/s] separating panels from mapped tails
  double rel_tol = 0.0;
  int intervals = 0;
};

/// V_out = \int dw/2pi T(w) K (M(w) + P) D (M(w) + P)^dagger K T(w)^dagger with
/// M = (i w + A)^-1, K = Diag(1, 1, sqrt(2 kappa_w) x2, sqrt(2 kappa_c) x2),
/// P = Diag(0, 0, 1/(2 kappa_w) x2, 1/(2 kappa_c) x2). Throws NumericalError
/// for an unstable model or a non-converged quadrature.
OutputCM output_covariance(const StateSpaceModel& model, const OutputWindow& window,
                           const SpectralOptions& options = {});

/// Intracavity stationary CM from A V + V A^T + D = 0.
Matrix6d intracavity_covariance(const StateSpaceModel& model);

/// The same intracavity CM from \int dw/2pi M D M^dagger by the quadrature
/// engine used for the output modes.
OutputCM intracavity_covariance_spectral(const StateSpaceModel& model,
                                         const SpectralOptions& options = {});

/// Solves A X + X A^T + Q = 0 (Kronecker form). Throws NumericalError when the
/// operator is singular, i.e. A has eigenvalue pairs with lambda_i + lambda_j = 0.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

}  // namespace optomw
