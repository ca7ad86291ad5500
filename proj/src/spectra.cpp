#include "optomw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "optomw/errors.hpp"

namespace optomw {

namespace {

using Complex = std::complex<double>;
using Matrix6cd = Eigen::Matrix<std::complex<double>, 6, 6>;

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

// Kernel inputs in units of omega_m.
struct ScaledModel {
  Matrix6d drift;
  Vector6d noise_sqrt;  // sqrt of the diagonal diffusion
  double kappa_w, kappa_c;
  double delta_w, delta_c;
};

ScaledModel scale(const StateSpaceModel& model) {
  const double u = model.omega_m;
  ScaledModel s;
  s.drift = model.drift / u;
  s.noise_sqrt = (model.diffusion.diagonal() / u).cwiseMax(0.0).cwiseSqrt();
  s.kappa_w = model.kappa_w / u;
  s.kappa_c = model.kappa_c / u;
  s.delta_w = model.drift(kXw, kYw) / u;
  s.delta_c = model.drift(kXc, kYc) / u;
  return s;
}

void require_stationary(const StateSpaceModel& model) {
  if (!check_stability(model).stable) throw NumericalError("no stationary state: drift matrix is unstable");
}

Matrix6cd response(const Matrix6d& drift, double omega) {
  Matrix6cd m = drift.cast<Complex>();
  m.diagonal().array() += Complex(0.0, omega);
  return m.partialPivLu().inverse();
}

// Feature locations and widths used to seed the adaptive panels.
std::vector<double> seed_breakpoints(const Matrix6d& drift, double cutoff,
                                     std::initializer_list<std::pair<double, double>> extra) {
  std::vector<std::pair<double, double>> features(extra);
  features.emplace_back(0.0, 1.0);
  Eigen::EigenSolver<Matrix6d> es(drift, false);
  for (int i = 0; i < 6; ++i) {
    const auto lam = es.eigenvalues()(i);
    const double w = std::max(std::abs(lam.real()), 1e-12);
    features.emplace_back(lam.imag(), w);
    features.emplace_back(-lam.imag(), w);
  }
  std::vector<double> points{-cutoff, cutoff};
  for (auto [x, w] : features) {
    for (double k : {0.0, 1.0, 5.0, 25.0}) {
      for (double sign : {-1.0, 1.0}) {
        const double p = x + sign * k * w;
        if (p > -cutoff && p < cutoff) points.push_back(p);
      }
    }
  }
  return points;
}

OutputCM finish(const quadrature::Result<Matrix6d>& r, double cutoff_rad, double rel_tol) {
  if (!r.converged) {
    const double achieved = r.error.cwiseAbs().maxCoeff() / std::max(r.value.cwiseAbs().maxCoeff(), 1e-300);
    throw NumericalError("frequency quadrature did not converge: achieved relative error " +
                         std::to_string(achieved) + " > " + std::to_string(rel_tol));
  }
  OutputCM cm;
  cm.matrix = 0.5 * (r.value + r.value.transpose());
  cm.error_estimate = r.error.maxCoeff();
  cm.cutoff = cutoff_rad;
  cm.rel_tol = rel_tol;
  cm.intervals = r.intervals;
  return cm;
}

}  // namespace

OutputWindow OutputWindow::from_epsilon(double epsilon, double omega_m, double center_c_rel,
                                        double center_w_rel) {
  return {epsilon / omega_m, center_c_rel * omega_m, center_w_rel * omega_m};
}

std::complex<double> filter_transfer(double omega, double tau, double omega_center) {
  return std::sqrt(2.0 / tau) / Complex(1.0 / tau, -(omega - omega_center));
}

OutputCM output_covariance(const StateSpaceModel& model, const OutputWindow& window,
                           const SpectralOptions& options) {
  if (!(window.tau > 0.0)) throw ValidationError("tau", "must be strictly positive");
  require_stationary(model);

  const ScaledModel s = scale(model);
  const double u = model.omega_m;
  const double tau = window.tau * u;
  const double center_w = window.omega_center_w / u;
  const double center_c = window.omega_center_c / u;

  Vector6d k_diag;
  k_diag << 1.0, 1.0, std::sqrt(2.0 * s.kappa_w), std::sqrt(2.0 * s.kappa_w),
      std::sqrt(2.0 * s.kappa_c), std::sqrt(2.0 * s.kappa_c);
  Vector6d p_diag;
  p_diag << 0.0, 0.0, 0.5 / s.kappa_w, 0.5 / s.kappa_w, 0.5 / s.kappa_c, 0.5 / s.kappa_c;

  // Quadrature-form filter: FT of Re g and Im g.
  auto filter_block = [&](double omega, double center, Matrix6cd& t, int row) {
    const Complex g_pos = filter_transfer(omega, tau, center);
    const Complex g_neg = std::conj(filter_transfer(-omega, tau, center));
    const Complex re = 0.5 * (g_pos + g_neg);
    const Complex im = (g_pos - g_neg) / Complex(0.0, 2.0);
    t(row, row) = re;
    t(row, row + 1) = -im;
    t(row + 1, row) = im;
    t(row + 1, row + 1) = re;
  };

  auto integrand = [&](double omega) -> Matrix6d {
    Matrix6cd h = response(s.drift, omega);
    h.diagonal() += p_diag.cast<Complex>();
    h = k_diag.cast<Complex>().asDiagonal() * h;
    Matrix6cd t = Matrix6cd::Zero();
    t(kQ, kQ) = 1.0;
    t(kP, kP) = 1.0;
    filter_block(omega, center_w, t, kXw);
    filter_block(omega, center_c, t, kXc);
    const Matrix6cd hn = (t * h) * s.noise_sqrt.cast<Complex>().asDiagonal();
    return (hn * hn.adjoint()).real() * kInvTwoPi;
  };

  const double cutoff =
      options.cutoff_factor *
      std::max({1.0, std::abs(s.delta_w), std::abs(s.delta_c), std::abs(center_w), std::abs(center_c)});
  const double filter_width = 1.0 / tau;
  auto points = seed_breakpoints(s.drift, cutoff,
                                 {{center_w, filter_width}, {-center_w, filter_width},
                                  {center_c, filter_width}, {-center_c, filter_width}});

  quadrature::Options qopt{options.rel_tol, 0.0, options.max_intervals};
  auto r = quadrature::integrate_real_line<Matrix6d>(integrand, points, cutoff, qopt);
  return finish(r, cutoff * u, options.rel_tol);
}

OutputCM intracavity_covariance_spectral(const StateSpaceModel& model, const SpectralOptions& options) {
  require_stationary(model);
  const ScaledModel s = scale(model);
  auto integrand = [&](double omega) -> Matrix6d {
    const Matrix6cd hn = response(s.drift, omega) * s.noise_sqrt.cast<Complex>().asDiagonal();
    return (hn * hn.adjoint()).real() * kInvTwoPi;
  };
  const double cutoff =
      options.cutoff_factor * std::max({1.0, std::abs(s.delta_w), std::abs(s.delta_c)});
  auto points = seed_breakpoints(s.drift, cutoff, {});
  quadrature::Options qopt{options.rel_tol, 0.0, options.max_intervals};
  auto r = quadrature::integrate_real_line<Matrix6d>(integrand, points, cutoff, qopt);
  return finish(r, cutoff * model.omega_m, options.rel_tol);
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n)
    throw ValidationError("lyapunov", "A and Q must be square and of equal size");

  // vec(A X + X A^T) = (I kron A + A kron I) vec(X), column-major vec.
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = j * n + i;
      for (Eigen::Index k = 0; k < n; ++k) {
        op(row, j * n + k) += a(i, k);
        op(row, k * n + i) += a(j, k);
      }
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw NumericalError("singular Lyapunov system (marginally stable drift?)");
  Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
  Eigen::VectorXd x = lu.solve(rhs);
  Eigen::MatrixXd out = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

Matrix6d intracavity_covariance(const StateSpaceModel& model) {
  const auto verdict = check_stability(model);
  if (!(verdict.spectral_abscissa < -1e-12 * model.omega_m))
    throw NumericalError("singular Lyapunov system: drift matrix is not strictly stable");
  const double u = model.omega_m;
  return solve_lyapunov(model.drift / u, model.diffusion / u);
}

}  // namespace optomw
