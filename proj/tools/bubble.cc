// Command-line entry point: one binary, one subcommand per analysis.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bubble/cli/config.hpp"
#include "bubble/cli/report.hpp"
#include "bubble/cli/verify.hpp"
#include "bubble/control_analysis.hpp"
#include "bubble/curve_output.hpp"
#include "bubble/number_format.hpp"
#include "bubble/radial_stokes.hpp"
#include "bubble/specfun.hpp"

namespace {

using namespace bubble;
using namespace bubble::cli;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// "2..7" or "2,3,5".
std::vector<int> parse_modes(const std::string& text) {
  std::vector<int> modes;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty mode range '" + text + "'");
    for (int k = lo; k <= hi; ++k) modes.push_back(k);
  } else {
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) modes.push_back(std::stoi(item));
  }
  if (modes.empty()) throw std::invalid_argument("no modes given");
  return modes;
}

std::string dashed(std::string name) {
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  return name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct FluidFlags {
  double nu_minus = 1.0, nu_plus = 1.0, rho_minus = 1.0, rho_plus = 1.0, mu = 1.0;
  double radius = 1.0, outer = 2.0;

  void add(CLI::App* app, bool with_radius = true) {
    app->add_option("--nu-minus", nu_minus, "inner viscosity")->capture_default_str();
    app->add_option("--nu-plus", nu_plus, "outer viscosity")->capture_default_str();
    app->add_option("--rho-minus", rho_minus, "inner density")->capture_default_str();
    app->add_option("--rho-plus", rho_plus, "outer density")->capture_default_str();
    app->add_option("--mu", mu, "surface tension coefficient")->capture_default_str();
    if (with_radius) app->add_option("--radius", radius, "interface radius r_s")->capture_default_str();
    app->add_option("--outer", outer, "outer wall radius R")->capture_default_str();
  }
  FluidParams params() const {
    FluidParams p{nu_plus, nu_minus, rho_plus, rho_minus, mu};
    p.validate();
    return p;
  }
  AnnularGeometry geom() const {
    AnnularGeometry g{radius, outer};
    g.validate();
    return g;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized two-phase Stokes interface toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.footer("Config keys for `simulate --config` (flags --<key> override the file):\n" +
             config_help());
  int status = kExitOk;

  // bessel zeros
  auto* bessel = app.add_subcommand("bessel", "Bessel functions of the first kind");
  bessel->require_subcommand(1);
  auto* zeros = bessel->add_subcommand("zeros", "positive zeros of J_order; CSV index,zero,residual");
  int zero_order = 1, zero_count = 10;
  std::string zero_csv;
  zeros->add_option("--order", zero_order, "Bessel order (0..64)")->capture_default_str();
  zeros->add_option("--count", zero_count, "number of zeros")->capture_default_str();
  zeros->add_option("--csv", zero_csv, "output path (stdout when absent)");
  zeros->callback([&] {
    check_writable(zero_csv);
    write_output(zero_csv, bessel_zeros_csv(bessel_zeros(zero_order, zero_count)));
  });
  auto* eval = bessel->add_subcommand("eval", "print J_order(x)");
  int eval_order = 1;
  double eval_x = 1.0;
  eval->add_option("--order", eval_order, "Bessel order (0..64)")->capture_default_str();
  eval->add_option("--x", eval_x, "argument in [0, inf)")->capture_default_str();
  eval->callback([&] { std::cout << format_double(bessel_j(eval_order, eval_x)) << '\n'; });

  // kernel-shapes
  auto* shapes = app.add_subcommand(
      "kernel-shapes",
      "curves of the displacement family with a_k = 1; CSV columns theta,x,y, SVG per curve");
  std::string shape_modes = "2..7", shape_format = "svg,csv", shape_dir = ".";
  double shape_amplitude = 0.3, shape_radius = 1.0;
  int shape_grid = 512;
  shapes->add_option("--modes", shape_modes, "wavenumbers, 'a..b' or comma list")->capture_default_str();
  shapes->add_option("--amplitude", shape_amplitude, "displacement scale")->capture_default_str();
  shapes->add_option("--grid", shape_grid, "angular samples M")->capture_default_str();
  shapes->add_option("--radius", shape_radius, "interface radius r_s")->capture_default_str();
  shapes->add_option("--out-dir", shape_dir, "output directory")->capture_default_str();
  shapes->add_option("--format", shape_format, "svg, csv or svg,csv")->capture_default_str();
  shapes->callback([&] {
    CurveOptions opt;
    opt.amplitude = shape_amplitude;
    opt.grid = shape_grid;
    opt.out_dir = shape_dir;
    opt.write_svg = shape_format.find("svg") != std::string::npos;
    opt.write_csv = shape_format.find("csv") != std::string::npos;
    if (!opt.write_svg && !opt.write_csv) {
      throw std::invalid_argument("--format must name svg and/or csv");
    }
    std::vector<KernelFamilySpec> specs;
    for (int k : parse_modes(shape_modes)) specs.push_back(KernelFamilySpec().set(k, 1.0, 0.0));
    const auto curves = emit_curves(specs, {shape_radius, 2.0 * shape_radius}, opt, &std::cerr);
    std::cout << "stem,kernel_residual,self_intersecting,winding_number\n";
    for (const EmittedCurve& c : curves) {
      std::cout << c.stem << ',' << format_double(c.kernel_residual) << ','
                << (c.self_intersecting ? 1 : 0) << ',' << c.winding_number << '\n';
    }
  });

  // spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum", "Stokes eigenvalues of one mode; CSV index,lambda,branch,mode,residual");
  int spec_mode = 0, spec_grid = 128, spec_count = 5;
  std::string spec_side = "inner", spec_csv;
  bool spec_analytic = false;
  FluidFlags spec_fluid;
  spectrum->add_option("--mode", spec_mode, "angular wavenumber")->capture_default_str();
  spectrum->add_option("--side", spec_side, "inner, outer or coupled")->capture_default_str();
  spec_fluid.add(spectrum);
  spectrum->add_option("--grid", spec_grid, "radial intervals N (>= 32)")->capture_default_str();
  spectrum->add_option("--count", spec_count, "number of eigenvalues")->capture_default_str();
  spectrum->add_flag("--analytic", spec_analytic, "closed-form mode-0 swirl branch instead");
  spectrum->add_option("--csv", spec_csv, "output path (stdout when absent)");
  spectrum->callback([&] {
    check_writable(spec_csv);
    const StokesSide side = parse_stokes_side(spec_side);
    const SpectrumResult result =
        spec_analytic
            ? swirl_spectrum_analytic(spec_fluid.params(), spec_fluid.geom(), spec_count)
            : stokes_spectrum_numeric(spec_mode, spec_fluid.params(), spec_fluid.geom(),
                                      spec_grid, spec_count, side);
    write_output(spec_csv, spectrum_csv(result));
  });

  // excluded-radii
  auto* excluded = app.add_subcommand(
      "excluded-radii", "pairs (lambda, J_1 zero) whose radius sqrt(nu-/lambda) z lies near r_s");
  ExcludedRadiusOptions ex_opt;
  FluidFlags ex_fluid;
  std::string ex_json;
  ex_fluid.add(excluded);
  excluded->add_option("--eigs", ex_opt.num_eigs, "eigenvalues per branch")->capture_default_str();
  excluded->add_option("--zeros", ex_opt.num_zeros, "J_1 zeros")->capture_default_str();
  excluded->add_option("--tol", ex_opt.tol, "gap tolerance")->capture_default_str();
  excluded->add_option("--max-mode", ex_opt.max_mode, "numeric branches for modes 1..max")
      ->capture_default_str();
  excluded->add_option("--grid", ex_opt.grid, "radial intervals of numeric branches")
      ->capture_default_str();
  excluded->add_option("--json", ex_json, "JSON report path");
  excluded->callback([&] {
    check_writable(ex_json);
    const ExcludedRadiusReport rep = excluded_radii(ex_fluid.params(), ex_fluid.geom(), ex_opt);
    std::printf("%-8s %-5s %-4s %-4s %-20s %-20s %-12s %s\n", "branch", "mode", "k", "l",
                "lambda", "predicted_radius", "gap", "self_match");
    for (const auto& m : rep.matches) {
      std::printf("%-8s %-5d %-4d %-4d %-20.12g %-20.12g %-12.4g %s\n",
                  to_string(m.branch).c_str(), m.lambda_mode, m.lambda_index, m.zero_index,
                  m.lambda, m.predicted_radius, m.gap, m.self_match ? "yes" : "no");
    }
    std::printf("%zu pair(s) within tol %g; spectrum: %s\n", rep.matches.size(), rep.tolerance,
                rep.provenance.c_str());
    if (!ex_json.empty()) write_output(ex_json, excluded_radii_json(rep));
  });

  // simulate
  auto* sim = app.add_subcommand(
      "simulate",
      "implicit Euler run of one mode; CSV step,time,F,G,interface_a,interface_b,energy,"
      "divergence_residual,kinematic_residual");
  std::string sim_config;
  std::map<std::string, std::string> sim_overrides;
  sim->add_option("--config", sim_config, "flat key = value file");
  for (const ConfigKey& k : config_keys()) {
    sim->add_option_function<std::string>(
        "--" + dashed(k.name), [&sim_overrides, name = std::string(k.name)](const std::string& v) {
          sim_overrides[name] = v;
        },
        std::string(k.help) + " [" + k.units + "]");
  }
  sim->callback([&] {
    RunConfig config = sim_config.empty() ? RunConfig{} : parse_config(read_file(sim_config));
    for (const auto& [key, value] : sim_overrides) set_config_value(config, key, value);
    validate_config(config);
    const auto states = run_simulation(config);
    write_output(config.output, trajectory_csv(states));
    if (!config.json.empty()) write_output(config.json, simulate_json(config, states));
  });

  // duality-check
  auto* duality = app.add_subcommand(
      "duality-check", "forward/adjoint duality identity with seeded random data");
  DualityOptions du_opt;
  FluidFlags du_fluid;
  std::string du_json;
  int du_grid = 64;
  duality->add_option("--mode", du_opt.mode, "angular wavenumber")->capture_default_str();
  duality->add_option("--horizon", du_opt.horizon, "final time T")->capture_default_str();
  duality->add_option("--steps", du_opt.steps, "time steps")->capture_default_str();
  duality->add_option("--seed", du_opt.seed, "random seed")->capture_default_str();
  duality->add_option("--grid", du_grid, "radial intervals per fluid")->capture_default_str();
  du_fluid.add(duality);
  duality->add_option("--json", du_json, "JSON report path");
  duality->callback([&] {
    check_writable(du_json);
    du_opt.n_inner = du_opt.n_outer = du_grid;
    const DualityReport rep = duality_check(du_fluid.params(), du_fluid.geom(), du_opt);
    std::cout << "lhs           " << format_double(rep.lhs) << '\n'
              << "rhs           " << format_double(rep.rhs) << '\n'
              << "rhs_transpose " << format_double(rep.rhs_transpose) << '\n'
              << "residual      " << format_double(rep.residual) << '\n';
    if (!du_json.empty()) {
      write_output(du_json, duality_json(rep, du_fluid.params(), du_fluid.geom(), du_opt));
    }
    if (!(rep.residual <= 1e-10)) status = kExitCheckFailed;
  });

  // gramian-scan
  auto* gram = app.add_subcommand(
      "gramian-scan",
      "singular values of the reachable map over a radius sweep; CSV radius,mode,horizon,steps,"
      "slabs,n_inner,n_outer,sigma_min,sigma_max,singular_values (';'-separated)");
  GramianOptions gr_opt;
  FluidFlags gr_fluid;
  double gr_min = 0.5, gr_max = 1.5;
  int gr_points = 8, gr_grid = 64;
  std::string gr_csv;
  gram->add_option("--mode", gr_opt.mode, "angular wavenumber")->capture_default_str();
  gram->add_option("--radius-min", gr_min, "smallest r_s")->capture_default_str();
  gram->add_option("--radius-max", gr_max, "largest r_s")->capture_default_str();
  gram->add_option("--points", gr_points, "radii in the sweep")->capture_default_str();
  gram->add_option("--horizon", gr_opt.horizon, "final time T")->capture_default_str();
  gram->add_option("--steps", gr_opt.steps, "time steps")->capture_default_str();
  gram->add_option("--slabs", gr_opt.slabs, "piecewise-constant control slabs")->capture_default_str();
  gram->add_option("--grid", gr_grid, "radial intervals per fluid")->capture_default_str();
  gram->add_option("--workers", gr_opt.workers, "worker threads")->capture_default_str();
  gr_fluid.add(gram, false);
  gram->add_option("--csv", gr_csv, "output path (stdout when absent)");
  gram->callback([&] {
    check_writable(gr_csv);
    if (gr_points < 1) throw std::invalid_argument("--points must be >= 1");
    gr_opt.params = gr_fluid.params();
    gr_opt.outer_radius = gr_fluid.outer;
    gr_opt.n_inner = gr_opt.n_outer = gr_grid;
    std::vector<double> radii;
    for (int i = 0; i < gr_points; ++i) {
      radii.push_back(gr_points == 1 ? gr_min : gr_min + (gr_max - gr_min) * i / (gr_points - 1));
    }
    write_output(gr_csv, gramian_csv(gramian_scan(gr_opt, radii)));
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 1 on any failure");
  std::string ve_level = "fast", ve_tangent = "cw";
  verify->add_option("level", ve_level, "fast (N=64, M=128) or full (N=128, M=256)")
      ->capture_default_str();
  verify->add_option("--tangent", ve_tangent,
                     "tangent orientation, cw or ccw (ccw is a deliberate mutation)")
      ->capture_default_str();
  verify->callback([&] {
    VerifyOptions opt;
    opt.level = parse_verify_level(ve_level);
    if (ve_tangent == "ccw") {
      opt.orientation = TangentOrientation::kCounterClockwise;
    } else if (ve_tangent != "cw") {
      throw std::invalid_argument("--tangent must be cw or ccw");
    }
    const auto results = run_verify(opt);
    std::cout << verify_table(results);
    for (const auto& r : results) {
      if (!r.pass) status = kExitCheckFailed;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return status;
}
