#pragma once

#include <ostream>
#include <string>

#include "optomw/model.hpp"
#include "optomw/spectra.hpp"
#include "optomw/steadystate.hpp"

namespace optomw {

/// Fixed 12-significant-digit rendering used in every emitted file.
std::string format_number(double value);

/// FNV-1a 64-bit hash (hex) of the canonical `name=value` dump of params.
std::string params_fingerprint(const DeviceParams& params);

void write_params(std::ostream& out, const DeviceParams& params);
void write_validation_report(std::ostream& out, const ValidationReport& report);
void write_derived_report(std::ostream& out, const DerivedQuantities& dq);

/// Steady state and linearized model as `key = value` lines plus matrix rows
/// in (dq, dp, dX_w, dY_w, dX_c, dY_c) order; SI units.
void write_state_report(std::ostream& out, const SteadyState& ss, const StateSpaceModel& model);

/// Comma-separated 6x6 dump preceded by `# key=value` metadata lines.
void write_output_cm_csv(std::ostream& out, const OutputCM& cm);

}  // namespace optomw
