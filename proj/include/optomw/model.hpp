#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace optomw {

/// Physical knobs of the opto-electro-mechanical device. SI units, angular
/// frequencies in rad/s. `kappa_*` are amplitude decay rates.
struct DeviceParams {
  double omega_m = 0.0;        ///< mechanical frequency
  double q_factor = 0.0;       ///< omega_m / gamma_m
  double omega_w = 0.0;        ///< microwave cavity frequency
  double kappa_w = 0.0;
  double power_w = 0.0;        ///< microwave drive power [W]
  double mass = 0.0;           ///< effective mechanical mass [kg]
  double temperature = 0.0;    ///< bath temperature [K]
  double gap_d = 0.0;          ///< capacitor plate separation [m]
  double mu = 0.0;             ///< capacitance participation ratio C0 / C_sigma
  double cavity_length = 0.0;  ///< optical Fabry-Perot length [m]
  double kappa_c = 0.0;
  double lambda_drive = 0.0;   ///< optical drive wavelength [m]
  double power_c = 0.0;        ///< optical drive power [W]
  double delta_c = 0.0;        ///< optical detuning (effective or bare, see DetuningMode)
  double delta_w = 0.0;        ///< microwave detuning

  double gamma_m() const { return omega_m / q_factor; }

  /// Reference device: 10 MHz membrane in a 10 GHz LC circuit, 1 mm optical
  /// cavity at 810 nm. Preset name `fig2-caption`.
  static DeviceParams fig2_caption();

  friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

/// How a field is interpreted when given in frequency units.
enum class FieldKind { angular_frequency, plain };

struct DeviceField {
  std::string_view name;
  double DeviceParams::*member;
  FieldKind kind;
};

/// Every DeviceParams field in declaration order; used by config parsing,
/// validation messages and reports.
extern const std::array<DeviceField, 15> kDeviceFields;

/// Single-photon couplings, drive amplitudes and thermal occupations.
struct DerivedQuantities {
  double g0c = 0.0;        ///< optomechanical single-photon coupling [rad/s]
  double g0w = 0.0;        ///< electromechanical single-photon coupling [rad/s]
  double drive_c = 0.0;    ///< E_c [sqrt(photons)/s]
  double drive_w = 0.0;    ///< E_w [sqrt(photons)/s]
  double omega_c = 0.0;    ///< optical cavity frequency 2 pi c / lambda
  double n_th_mech = 0.0;
  double n_th_w = 0.0;
  double n_th_c = 0.0;
};

/// E_w is not tied to P_w in the source model; the mirrored optical relation is
/// assumed and this string is written into output metadata.
inline constexpr std::string_view kDriveWFormula = "E_w=sqrt(2*P_w*kappa_w/(hbar*omega_w)) (assumed)";

/// Mean Bose occupation 1/(exp(hbar w / kB T) - 1); exactly 0 at T = 0.
double bose_occupation(double omega, double temperature);

/// Zero-point displacement scale sqrt(hbar / (m omega_m)).
double zero_point_length(const DeviceParams& params);

DerivedQuantities derive_quantities(const DeviceParams& params);

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> advisories;

  bool ok() const { return violations.empty(); }
};

/// Never throws; lists every violated invariant plus regime-of-validity advisories.
ValidationReport validate_params(const DeviceParams& params);

/// Throws ValidationError naming the first violated field.
void require_valid(const DeviceParams& params);

}  // namespace optomw
