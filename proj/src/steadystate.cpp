#include "optomw/steadystate.hpp"

#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "optomw/errors.hpp"

namespace optomw {

namespace {

struct Amplitudes {
  double alpha_sq;
  double beta_sq;
};

Amplitudes intracavity_photons(const DeviceParams& p, const DerivedQuantities& dq,
                               double delta_c, double delta_w) {
  return {dq.drive_c * dq.drive_c / (p.kappa_c * p.kappa_c + delta_c * delta_c),
          dq.drive_w * dq.drive_w / (p.kappa_w * p.kappa_w + delta_w * delta_w)};
}

double static_displacement(const DeviceParams& p, const DerivedQuantities& dq, Amplitudes a) {
  return (dq.g0c * a.alpha_sq + dq.g0w * a.beta_sq) / p.omega_m;
}

}  // namespace

SteadyState solve_fixed_point(const DeviceParams& params, const DerivedQuantities& dq,
                              DetuningMode mode, const FixedPointOptions& options) {
  require_valid(params);
  SteadyState ss;

  if (mode == DetuningMode::effective) {
    ss.delta_c_eff = params.delta_c;
    ss.delta_w_eff = params.delta_w;
    const auto amp = intracavity_photons(params, dq, ss.delta_c_eff, ss.delta_w_eff);
    ss.alpha_s = std::sqrt(amp.alpha_sq);
    ss.beta_s = std::sqrt(amp.beta_sq);
    ss.q_s = static_displacement(params, dq, amp);
    ss.delta_c_bare = ss.delta_c_eff + dq.g0c * ss.q_s;
    ss.delta_w_bare = ss.delta_w_eff + dq.g0w * ss.q_s;
  } else {
    ss.delta_c_bare = params.delta_c;
    ss.delta_w_bare = params.delta_w;
    auto map = [&](double q) {
      return static_displacement(params, dq,
                                 intracavity_photons(params, dq, ss.delta_c_bare - dq.g0c * q,
                                                     ss.delta_w_bare - dq.g0w * q));
    };

    // Damped iteration q <- (1 - d) q + d f(q). The trace keeps the last
    // iterates for diagnostics on failure.
    std::deque<double> recent;
    double q = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      const double next = (1.0 - options.damping) * q + options.damping * map(q);
      recent.push_back(next);
      if (recent.size() > 32) recent.pop_front();
      if (!std::isfinite(next)) break;
      const bool done = std::abs(next - q) <= options.rel_tol * std::max(std::abs(next), 1e-300);
      q = next;
      if (done || next == 0.0) {
        converged = true;
        ++it;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("bare-detuning fixed point did not converge after " +
                                 std::to_string(it) + " iterations (bistable regime?)",
                             std::vector<double>(recent.begin(), recent.end()));
    }
    ss.iterations = it;
    ss.q_s = q;
    ss.delta_c_eff = ss.delta_c_bare - dq.g0c * q;
    ss.delta_w_eff = ss.delta_w_bare - dq.g0w * q;
    const auto amp = intracavity_photons(params, dq, ss.delta_c_eff, ss.delta_w_eff);
    ss.alpha_s = std::sqrt(amp.alpha_sq);
    ss.beta_s = std::sqrt(amp.beta_sq);
  }

  ss.g_c = std::sqrt(2.0) * dq.g0c * ss.alpha_s;
  ss.g_w = std::sqrt(2.0) * dq.g0w * ss.beta_s;
  ss.stable = check_stability(build_state_space(params, dq, ss)).stable;
  return ss;
}

StateSpaceModel build_state_space(const DeviceParams& params, const DerivedQuantities& dq,
                                  const SteadyState& ss) {
  StateSpaceModel m;
  const double wm = params.omega_m;
  const double gm = params.gamma_m();
  const double kw = params.kappa_w;
  const double kc = params.kappa_c;
  const double dw = ss.delta_w_eff;
  const double dc = ss.delta_c_eff;

  Matrix6d& a = m.drift;
  a(kQ, kP) = wm;
  a(kP, kQ) = -wm;
  a(kP, kP) = -gm;
  a(kP, kXw) = ss.g_w;
  a(kP, kXc) = ss.g_c;
  a(kXw, kXw) = -kw;
  a(kXw, kYw) = dw;
  a(kYw, kQ) = ss.g_w;
  a(kYw, kXw) = -dw;
  a(kYw, kYw) = -kw;
  a(kXc, kXc) = -kc;
  a(kXc, kYc) = dc;
  a(kYc, kQ) = ss.g_c;
  a(kYc, kXc) = -dc;
  a(kYc, kYc) = -kc;

  Matrix6d& d = m.diffusion;
  d(kP, kP) = gm * (2.0 * dq.n_th_mech + 1.0);
  d(kXw, kXw) = d(kYw, kYw) = kw * (2.0 * dq.n_th_w + 1.0);
  d(kXc, kXc) = d(kYc, kYc) = kc * (2.0 * dq.n_th_c + 1.0);

  m.kappa_c = kc;
  m.kappa_w = kw;
  m.omega_m = wm;
  m.n_th_w = dq.n_th_w;
  m.n_th_c = dq.n_th_c;
  m.n_th_mech = dq.n_th_mech;
  return m;
}

StabilityVerdict check_stability(const StateSpaceModel& model) {
  if (!model.drift.allFinite()) throw NumericalError("drift matrix has non-finite entries");
  // Scaled by omega_m to keep the eigenproblem well conditioned.
  const double unit = model.omega_m > 0.0 ? model.omega_m : 1.0;
  Eigen::EigenSolver<Matrix6d> solver(model.drift / unit, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed on drift matrix");

  StabilityVerdict v;
  v.spectral_abscissa = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 6; ++i) {
    v.eigenvalues[i] = solver.eigenvalues()(i) * unit;
    v.spectral_abscissa = std::max(v.spectral_abscissa, v.eigenvalues[i].real());
  }
  v.margin = -v.spectral_abscissa;
  v.stable = v.spectral_abscissa < 0.0;
  return v;
}

StateSpaceModel build_model(const DeviceParams& params, DetuningMode mode) {
  const auto dq = derive_quantities(params);
  const auto ss = solve_fixed_point(params, dq, mode);
  return build_state_space(params, dq, ss);
}

double find_power_stability_limit(const DeviceParams& params, DetuningMode mode, double rel_tol,
                                  double max_scale) {
  auto stable_at = [&](double scale) {
    DeviceParams p = params;
    p.power_c *= scale;
    p.power_w *= scale;
    return check_stability(build_model(p, mode)).stable;
  };
  if (!stable_at(1.0)) throw NumericalError("base point is already unstable");

  double lo = 1.0;
  double hi = 2.0;
  while (stable_at(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > max_scale) throw NumericalError("no stability flip found below max_scale");
  }
  while (hi - lo > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    (stable_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace optomw
