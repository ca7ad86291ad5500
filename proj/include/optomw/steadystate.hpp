#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "optomw/model.hpp"

namespace optomw {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Quadrature ordering of the fluctuation vector and of every 6x6 matrix.
enum Quadrature : int { kQ = 0, kP = 1, kXw = 2, kYw = 3, kXc = 4, kYc = 5 };

/// Whether DeviceParams::delta_{c,w} are the effective detunings (shift already
/// included) or the bare detunings of the drives from the cavity resonances.
enum class DetuningMode { effective, bare };

struct SteadyState {
  double alpha_s = 0.0;      ///< intracavity optical amplitude, real >= 0
  double beta_s = 0.0;       ///< intracavity microwave amplitude, real >= 0
  double q_s = 0.0;          ///< static displacement in zero-point units (p_s = 0)
  double delta_c_eff = 0.0;
  double delta_w_eff = 0.0;
  double delta_c_bare = 0.0;
  double delta_w_bare = 0.0;
  double g_c = 0.0;          ///< many-photon coupling sqrt(2) g0c alpha_s
  double g_w = 0.0;          ///< many-photon coupling sqrt(2) g0w beta_s
  int iterations = 0;        ///< fixed-point iterations (0 in effective mode)
  bool stable = false;
};

struct FixedPointOptions {
  double damping = 0.5;
  int max_iterations = 10000;
  double rel_tol = 1e-12;
};

/// Linearized fluctuation dynamics du/dt = A u + n with symmetrized noise
/// correlations <n_i(t) n_j(t')>_sym = D_ij delta(t - t'). SI units.
struct StateSpaceModel {
  Matrix6d drift = Matrix6d::Zero();
  Matrix6d diffusion = Matrix6d::Zero();
  double kappa_c = 0.0;
  double kappa_w = 0.0;
  double omega_m = 0.0;  ///< frequency unit used by the numerical kernels
  double n_th_w = 0.0;
  double n_th_c = 0.0;
  double n_th_mech = 0.0;
};

struct StabilityVerdict {
  bool stable = false;
  double spectral_abscissa = 0.0;  ///< max Re(lambda) of A [rad/s]
  double margin = 0.0;             ///< -spectral_abscissa; positive when stable
  std::array<std::complex<double>, 6> eigenvalues{};
};

SteadyState solve_fixed_point(const DeviceParams& params, const DerivedQuantities& dq,
                              DetuningMode mode = DetuningMode::effective,
                              const FixedPointOptions& options = {});

StateSpaceModel build_state_space(const DeviceParams& params, const DerivedQuantities& dq,
                                  const SteadyState& ss);

StabilityVerdict check_stability(const StateSpaceModel& model);

/// Convenience: derive, solve and build in one call.
StateSpaceModel build_model(const DeviceParams& params, DetuningMode mode = DetuningMode::effective);

/// Smallest common scale factor s on (P_c, P_w) at which the linearized
/// dynamics turns unstable, located by bracketing and bisection to `rel_tol`.
/// Throws NumericalError if the base point is unstable or no flip is found
/// below `max_scale`.
double find_power_stability_limit(const DeviceParams& params,
                                  DetuningMode mode = DetuningMode::effective,
                                  double rel_tol = 1e-6, double max_scale = 1e12);

}  // namespace optomw
