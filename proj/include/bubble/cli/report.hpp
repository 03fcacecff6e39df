#pragma once

// CSV and JSON serialization of the analysis results. CSV uses a header row,
// comma separators, LF line endings and 17 significant digits; JSON reports
// are single objects with `inputs`, `outputs`, `version` and `seed`.

#include <string>
#include <vector>

#include "bubble/cli/config.hpp"
#include "bubble/control_analysis.hpp"
#include "bubble/mode_dynamics.hpp"
#include "bubble/radial_stokes.hpp"
#include "bubble/specfun.hpp"

namespace bubble::cli {

/// index,zero,residual
std::string bessel_zeros_csv(const BesselZeroTable& table);

/// index,lambda,branch,mode,residual
std::string spectrum_csv(const SpectrumResult& spectrum);

/// radius,mode,horizon,steps,slabs,n_inner,n_outer,sigma_min,sigma_max,singular_values
/// (the last column is ';'-separated, descending).
std::string gramian_csv(const std::vector<GramianReport>& reports);

/// step,time,F,G,interface_a,interface_b,energy,divergence_residual,kinematic_residual
std::string trajectory_csv(const std::vector<SimState>& states);

std::string excluded_radii_json(const ExcludedRadiusReport& report);
std::string duality_json(const DualityReport& report, const FluidParams& params,
                         const AnnularGeometry& geom, const DualityOptions& options);
std::string simulate_json(const RunConfig& config, const std::vector<SimState>& states);

/// Writes `text` to `path`, or to stdout when `path` is empty. Throws
/// std::runtime_error when the file cannot be written.
void write_output(const std::string& path, const std::string& text);

/// Runs the simulation described by a validated config.
std::vector<SimState> run_simulation(const RunConfig& config);

}  // namespace bubble::cli
