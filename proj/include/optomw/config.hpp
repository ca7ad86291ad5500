#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomw/model.hpp"
#include "optomw/spectra.hpp"
#include "optomw/steadystate.hpp"
#include "optomw/teleport.hpp"

namespace optomw {

enum class SweepAxis { omega_w_center, omega_c_center, epsilon, cat_alpha, temperature };
enum class Observable { log_neg, f_cat, f_coherent, f_opt, stability_margin };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Observable obs);
std::string_view to_string(Direction direction);
std::string_view to_string(DetuningMode mode);

std::optional<SweepAxis> parse_axis(std::string_view s);
std::optional<Observable> parse_observable(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);
std::optional<DetuningMode> parse_detuning_mode(std::string_view s);

/// Output window in omega_m-relative units, so it follows omega_m edits.
struct WindowSpec {
  double epsilon = 100.0;        ///< tau omega_m
  double center_c_rel = -1.0;    ///< Omega_c / omega_m
  double center_w_rel = 1.0;     ///< Omega_w / omega_m

  OutputWindow resolve(double omega_m) const {
    return OutputWindow::from_epsilon(epsilon, omega_m, center_c_rel, center_w_rel);
  }
};

struct AxisRange {
  SweepAxis axis = SweepAxis::omega_w_center;
  double start = 0.8;
  double stop = 1.2;
  int points = 81;
};

/// Everything one CLI invocation needs: device, window, protocol and sweep.
struct RunConfig {
  std::string preset = "fig2-caption";
  DeviceParams params = DeviceParams::fig2_caption();
  DetuningMode mode = DetuningMode::effective;
  WindowSpec window;
  Direction direction = Direction::forward;
  double cat_alpha = 1.0;
  std::optional<AxisRange> sweep;
  std::vector<double> epsilons = {100.0, 200.0, 500.0, 1000.0};
  std::vector<Observable> outputs = {Observable::log_neg, Observable::f_cat, Observable::f_coherent,
                                     Observable::f_opt, Observable::stability_margin};
  double rel_tol = 1e-8;

  SpectralOptions spectral() const {
    SpectralOptions o;
    o.rel_tol = rel_tol;
    return o;
  }
};

/// Names accepted by `preset_config`.
inline constexpr std::string_view kDefaultPreset = "fig2-caption";

/// Throws ConfigError for unknown names.
RunConfig preset_config(std::string_view name);

/// Flat `key = value` text, `#` comments. Angular-frequency fields accept a
/// `_hz` suffix (cycles/s, multiplied by 2 pi) or `_wm` (units of omega_m).
/// Throws ConfigError with the offending line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace optomw
