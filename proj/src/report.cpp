#include "optomw/report.hpp"

#include <cstdint>
#include <sstream>

#include <fmt/format.h>

#include "optomw/constants.hpp"

namespace optomw {

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

std::string params_fingerprint(const DeviceParams& params) {
  std::ostringstream canon;
  write_params(canon, params);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

void write_params(std::ostream& out, const DeviceParams& params) {
  for (const auto& f : kDeviceFields) out << f.name << " = " << format_number(params.*f.member) << '\n';
}

void write_validation_report(std::ostream& out, const ValidationReport& report) {
  out << "valid = " << (report.ok() ? "true" : "false") << '\n';
  for (const auto& v : report.violations) out << "violation = " << v.field << ": " << v.message << '\n';
  for (const auto& a : report.advisories) out << "advisory = " << a << '\n';
}

void write_derived_report(std::ostream& out, const DerivedQuantities& dq) {
  out << "[derived]\n"
      << "g0c = " << format_number(dq.g0c) << '\n'
      << "g0w = " << format_number(dq.g0w) << '\n'
      << "drive_c = " << format_number(dq.drive_c) << '\n'
      << "drive_w = " << format_number(dq.drive_w) << '\n'
      << "omega_c = " << format_number(dq.omega_c) << '\n'
      << "n_th_mech = " << format_number(dq.n_th_mech) << '\n'
      << "n_th_w = " << format_number(dq.n_th_w) << '\n'
      << "n_th_c = " << format_number(dq.n_th_c) << '\n'
      << "drive_w_formula = " << kDriveWFormula << '\n'
      << "constants = " << constants::table_version << '\n';
}

namespace {

void write_matrix(std::ostream& out, const char* name, const Matrix6d& m) {
  out << '[' << name << "]\n";
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) out << (j ? ", " : "") << format_number(m(i, j));
    out << '\n';
  }
}

}  // namespace

void write_state_report(std::ostream& out, const SteadyState& ss, const StateSpaceModel& model) {
  out << "[steady_state]\n"
      << "alpha_s = " << format_number(ss.alpha_s) << '\n'
      << "beta_s = " << format_number(ss.beta_s) << '\n'
      << "q_s = " << format_number(ss.q_s) << '\n'
      << "p_s = 0\n"
      << "delta_c_eff = " << format_number(ss.delta_c_eff) << '\n'
      << "delta_w_eff = " << format_number(ss.delta_w_eff) << '\n'
      << "delta_c_bare = " << format_number(ss.delta_c_bare) << '\n'
      << "delta_w_bare = " << format_number(ss.delta_w_bare) << '\n'
      << "g_c = " << format_number(ss.g_c) << '\n'
      << "g_w = " << format_number(ss.g_w) << '\n'
      << "iterations = " << ss.iterations << '\n'
      << "stable = " << (ss.stable ? "true" : "false") << '\n'
      << "ordering = dq, dp, dX_w, dY_w, dX_c, dY_c\n";
  write_matrix(out, "drift", model.drift);
  write_matrix(out, "diffusion", model.diffusion);
}

void write_output_cm_csv(std::ostream& out, const OutputCM& cm) {
  out << "# cutoff_rad_s=" << format_number(cm.cutoff) << '\n'
      << "# rel_tol=" << format_number(cm.rel_tol) << '\n'
      << "# error_estimate=" << format_number(cm.error_estimate) << '\n'
      << "# intervals=" << cm.intervals << '\n'
      << "q,p,x_w,y_w,x_c,y_c\n";
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) out << (j ? "," : "") << format_number(cm.matrix(i, j));
    out << '\n';
  }
}

}  // namespace optomw
