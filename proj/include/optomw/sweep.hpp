#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "optomw/config.hpp"

namespace optomw {

/// Full-pipeline evaluation of one parameter point.
struct PointResult {
  double x = 0.0;
  double epsilon = 0.0;
  bool stable = false;
  double stability_margin = 0.0;  ///< -max Re(lambda) / omega_m
  double log_neg = 0.0;
  double f_cat = 0.0;
  double f_coherent = 0.0;
  double f_opt = 0.0;
  double min_symplectic = 0.0;    ///< of the 4x4 output block
  bool physical = false;
  std::string error;              ///< non-empty when the point failed numerically

  bool ok() const { return stable && error.empty(); }
  double value(Observable obs) const;
};

struct PointInput {
  DeviceParams params;
  WindowSpec window;
  Direction direction = Direction::forward;
  double cat_alpha = 1.0;
  DetuningMode mode = DetuningMode::effective;
  SpectralOptions spectral;
};

/// Never throws for numerical trouble: an unstable point is returned with
/// stable = false, a failed one with `error` set.
PointResult evaluate_point(const PointInput& input);

struct SweepSpec {
  AxisRange range;
  PointInput fixed;
  std::vector<Observable> outputs;

  std::vector<double> axis_values() const;
  /// `fixed` with the swept coordinate set to x (units per axis: Omega in
  /// omega_m, epsilon and alpha dimensionless, temperature in K).
  PointInput at(double x) const;
};

SweepSpec sweep_from_config(const RunConfig& cfg);

/// Rows ordered by grid index for any `jobs`; jobs <= 0 uses all hardware threads.
std::vector<PointResult> run_sweep(const SweepSpec& spec, int jobs = 1);

/// Header comments, then `index,x_value,epsilon,stable,physical,<outputs...>`.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const RunConfig& cfg,
                     const std::vector<PointResult>& rows);

struct FigureSpec {
  std::string name;
  AxisRange range;
  double center_c_rel = -1.0;
  double center_w_rel = 1.0;
  double cat_alpha = 1.0;
  Direction direction = Direction::forward;
  Observable observable = Observable::log_neg;
};

/// fig2 (E_N vs Omega_w), fig3 (F_cat vs Omega_w), fig4 (F_cat vs alpha),
/// sm1 (reversed F_cat vs Omega_c).
std::optional<FigureSpec> figure_preset(std::string_view name);

struct FigureData {
  FigureSpec spec;
  std::vector<double> epsilons;
  std::vector<std::vector<PointResult>> curves;  ///< one per epsilon
};

FigureData compute_figure(const FigureSpec& spec, const RunConfig& cfg, int jobs = 1);

/// Long format: `x_value,observable,epsilon,value,f_opt` after `#` provenance lines.
void write_figure_csv(std::ostream& out, const FigureData& data, const RunConfig& cfg);

/// Computes and writes <out_dir>/<name>.csv. Throws ValidationError for an
/// unknown name and Error (with the path) on I/O failure.
std::filesystem::path emit_figure(std::string_view name, const RunConfig& cfg,
                                  const std::filesystem::path& out_dir, int jobs = 1);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace optomw
