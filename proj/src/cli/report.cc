#include "bubble/cli/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "bubble/number_format.hpp"

namespace bubble::cli {

namespace {

using nlohmann::ordered_json;

ordered_json params_json(const FluidParams& p, const AnnularGeometry& g) {
  return {{"radius", g.r_s},      {"outer", g.R},         {"nu_minus", p.nu_minus},
          {"nu_plus", p.nu_plus}, {"rho_minus", p.rho_minus}, {"rho_plus", p.rho_plus},
          {"mu", p.mu}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string bessel_zeros_csv(const BesselZeroTable& table) {
  std::ostringstream out;
  out << "index,zero,residual\n";
  for (std::size_t k = 0; k < table.zeros.size(); ++k) {
    out << k + 1 << ',' << format_double(table.zeros[k]) << ','
        << format_double(std::abs(bessel_j(table.order, table.zeros[k]))) << '\n';
  }
  return out.str();
}

std::string spectrum_csv(const SpectrumResult& spectrum) {
  std::ostringstream out;
  out << "index,lambda,branch,mode,residual\n";
  for (std::size_t k = 0; k < spectrum.entries.size(); ++k) {
    const SpectrumEntry& e = spectrum.entries[k];
    out << k + 1 << ',' << format_double(e.lambda) << ',' << to_string(e.branch) << ',' << e.mode
        << ',' << format_double(e.residual) << '\n';
  }
  return out.str();
}

std::string gramian_csv(const std::vector<GramianReport>& reports) {
  std::ostringstream out;
  out << "radius,mode,horizon,steps,slabs,n_inner,n_outer,sigma_min,sigma_max,singular_values\n";
  for (const GramianReport& r : reports) {
    out << format_double(r.radius) << ',' << r.mode << ',' << format_double(r.horizon) << ','
        << r.steps << ',' << r.slabs << ',' << r.n_inner << ',' << r.n_outer << ','
        << format_double(r.sigma_min) << ',' << format_double(r.sigma_max) << ',';
    for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) {
      if (i > 0) out << ';';
      out << format_double(r.singular_values[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const std::vector<SimState>& states) {
  std::ostringstream out;
  out << "step,time,F,G,interface_a,interface_b,energy,divergence_residual,kinematic_residual\n";
  for (const SimState& s : states) {
    out << s.step << ',' << format_double(s.time) << ',' << format_double(s.displacement[0])
        << ',' << format_double(s.displacement[1]) << ','
        << format_double(s.interface_velocity[0]) << ','
        << format_double(s.interface_velocity[1]) << ',' << format_double(s.energy) << ','
        << format_double(s.divergence_residual) << ',' << format_double(s.kinematic_residual)
        << '\n';
  }
  return out.str();
}

std::string excluded_radii_json(const ExcludedRadiusReport& report) {
  ordered_json inputs = params_json(report.params, report.geom);
  inputs["eigs"] = report.options.num_eigs;
  inputs["zeros"] = report.options.num_zeros;
  inputs["tol"] = report.options.tol;
  inputs["max_mode"] = report.options.max_mode;
  inputs["grid"] = report.options.grid;

  ordered_json matches = ordered_json::array();
  for (const ExcludedRadiusMatch& m : report.matches) {
    matches.push_back({{"lambda", m.lambda},
                       {"lambda_mode", m.lambda_mode},
                       {"lambda_index", m.lambda_index},
                       {"branch", to_string(m.branch)},
                       {"zero_index", m.zero_index},
                       {"zero", m.zero},
                       {"predicted_radius", m.predicted_radius},
                       {"gap", m.gap},
                       {"self_match", m.self_match}});
  }
  ordered_json out;
  out["inputs"] = inputs;
  out["outputs"] = {{"tolerance", report.tolerance},
                    {"provenance", report.provenance},
                    {"matches", matches}};
  out["version"] = kVersion;
  out["seed"] = nullptr;
  return dump(out);
}

std::string duality_json(const DualityReport& report, const FluidParams& params,
                         const AnnularGeometry& geom, const DualityOptions& options) {
  ordered_json inputs = params_json(params, geom);
  inputs["mode"] = options.mode;
  inputs["horizon"] = options.horizon;
  inputs["steps"] = options.steps;
  inputs["n_inner"] = options.n_inner;
  inputs["n_outer"] = options.n_outer;
  ordered_json out;
  out["inputs"] = inputs;
  out["outputs"] = {{"lhs", report.lhs},
                    {"rhs", report.rhs},
                    {"rhs_transpose", report.rhs_transpose},
                    {"residual", report.residual}};
  out["version"] = kVersion;
  out["seed"] = report.seed;
  return dump(out);
}

std::string simulate_json(const RunConfig& config, const std::vector<SimState>& states) {
  ordered_json inputs;
  for (const ConfigKey& k : config_keys()) {
    std::visit([&](auto member) { inputs[k.name] = config.*member; }, k.field);
  }
  const SimState& last = states.back();
  double worst_div = 0.0, worst_kin = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < states.size(); ++i) {
    worst_div = std::max(worst_div, states[i].divergence_residual);
    worst_kin = std::max(worst_kin, states[i].kinematic_residual);
    if (i > 0 && config.control_normal == 0.0 && config.control_azimuthal == 0.0) {
      monotone = monotone && states[i].energy <= states[i - 1].energy;
    }
  }
  ordered_json out;
  out["inputs"] = inputs;
  out["outputs"] = {{"final_time", last.time},
                    {"final_F", last.displacement[0]},
                    {"final_G", last.displacement[1]},
                    {"final_energy", last.energy},
                    {"initial_energy", states.front().energy},
                    {"max_divergence_residual", worst_div},
                    {"max_kinematic_residual", worst_kin},
                    {"energy_non_increasing", monotone}};
  out["version"] = kVersion;
  out["seed"] = config.seed;
  return dump(out);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

std::vector<SimState> run_simulation(const RunConfig& config) {
  validate_config(config);
  ModeStepper stepper(assemble_mode_system(config.mode, config.params(), config.geom(),
                                           Domain::kTwoPhase, config.n_inner, config.n_outer),
                      config.horizon / config.steps);
  SimulationInput input;
  input.steps = config.steps;
  input.controls = Eigen::Matrix2Xd(2, config.steps);
  input.controls.row(0).setConstant(config.control_normal);
  input.controls.row(1).setConstant(config.control_azimuthal);
  if (config.initial == "random") input.initial = seeded_normal(stepper.state_size(), config.seed);
  return simulate(stepper, input);
}

}  // namespace bubble::cli
