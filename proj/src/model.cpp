#include "optomw/model.hpp"

#include <cmath>

#include "optomw/constants.hpp"
#include "optomw/errors.hpp"

namespace optomw {

using constants::hbar;
using constants::k_boltzmann;
using constants::two_pi;

const std::array<DeviceField, 15> kDeviceFields = {{
    {"omega_m", &DeviceParams::omega_m, FieldKind::angular_frequency},
    {"q_factor", &DeviceParams::q_factor, FieldKind::plain},
    {"omega_w", &DeviceParams::omega_w, FieldKind::angular_frequency},
    {"kappa_w", &DeviceParams::kappa_w, FieldKind::angular_frequency},
    {"power_w", &DeviceParams::power_w, FieldKind::plain},
    {"mass", &DeviceParams::mass, FieldKind::plain},
    {"temperature", &DeviceParams::temperature, FieldKind::plain},
    {"gap_d", &DeviceParams::gap_d, FieldKind::plain},
    {"mu", &DeviceParams::mu, FieldKind::plain},
    {"cavity_length", &DeviceParams::cavity_length, FieldKind::plain},
    {"kappa_c", &DeviceParams::kappa_c, FieldKind::angular_frequency},
    {"lambda_drive", &DeviceParams::lambda_drive, FieldKind::plain},
    {"power_c", &DeviceParams::power_c, FieldKind::plain},
    {"delta_c", &DeviceParams::delta_c, FieldKind::angular_frequency},
    {"delta_w", &DeviceParams::delta_w, FieldKind::angular_frequency},
}};

DeviceParams DeviceParams::fig2_caption() {
  DeviceParams p;
  p.omega_m = two_pi * 10e6;
  p.q_factor = 1.5e5;
  p.omega_w = two_pi * 10e9;
  p.kappa_w = 0.04 * p.omega_m;
  p.power_w = 42e-3;
  p.mass = 10e-12;
  p.temperature = 15e-3;
  p.gap_d = 100e-9;
  p.mu = 0.013;
  p.cavity_length = 1e-3;
  p.kappa_c = 0.04 * p.omega_m;
  p.lambda_drive = 810e-9;
  p.power_c = 3.4e-3;
  p.delta_c = -p.omega_m;
  p.delta_w = p.omega_m;
  return p;
}

double bose_occupation(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  // expm1 keeps the high-temperature limit k_B T / (hbar w) accurate.
  return 1.0 / std::expm1(hbar * omega / (k_boltzmann * temperature));
}

double zero_point_length(const DeviceParams& params) {
  return std::sqrt(hbar / (params.mass * params.omega_m));
}

ValidationReport validate_params(const DeviceParams& params) {
  ValidationReport report;
  auto violate = [&](std::string_view field, std::string message) {
    report.violations.push_back({std::string(field), std::move(message)});
  };

  for (const auto& field : kDeviceFields) {
    const double value = params.*field.member;
    if (!std::isfinite(value)) {
      violate(field.name, "must be finite");
      continue;
    }
    if (field.name == "delta_c" || field.name == "delta_w") continue;
    if (field.name == "temperature" || field.name == "power_c" || field.name == "power_w") {
      if (value < 0.0) violate(field.name, "must be non-negative");
      continue;
    }
    if (field.name == "mu") {
      if (!(value > 0.0 && value < 1.0)) violate(field.name, "must lie in (0, 1)");
      continue;
    }
    if (!(value > 0.0)) violate(field.name, "must be strictly positive");
  }

  auto usable = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (usable(params.omega_m)) {
    if (usable(params.kappa_c) && params.kappa_c >= params.omega_m)
      report.advisories.push_back("resolved-sideband assumption violated: kappa_c >= omega_m");
    if (usable(params.kappa_w) && params.kappa_w >= params.omega_m)
      report.advisories.push_back("resolved-sideband assumption violated: kappa_w >= omega_m");
  }
  return report;
}

void require_valid(const DeviceParams& params) {
  auto report = validate_params(params);
  if (!report.ok()) {
    const auto& first = report.violations.front();
    throw ValidationError(first.field, first.message);
  }
}

DerivedQuantities derive_quantities(const DeviceParams& params) {
  require_valid(params);

  DerivedQuantities dq;
  const double x_zpf = zero_point_length(params);
  dq.omega_c = two_pi * constants::speed_of_light / params.lambda_drive;
  dq.g0c = dq.omega_c / params.cavity_length * x_zpf;
  dq.g0w = params.mu * params.omega_w / (2.0 * params.gap_d) * x_zpf;

  // Drive frequencies omega_0j = omega_j - Delta_j are replaced by omega_j;
  // the detunings are ~1e-8 relative corrections.
  dq.drive_c = std::sqrt(2.0 * params.power_c * params.kappa_c / (hbar * dq.omega_c));
  dq.drive_w = std::sqrt(2.0 * params.power_w * params.kappa_w / (hbar * params.omega_w));

  dq.n_th_mech = bose_occupation(params.omega_m, params.temperature);
  dq.n_th_w = bose_occupation(params.omega_w, params.temperature);
  dq.n_th_c = bose_occupation(dq.omega_c, params.temperature);
  return dq;
}

}  // namespace optomw
