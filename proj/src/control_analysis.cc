#include "bubble/control_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bubble/specfun.hpp"

namespace bubble {

// ---------------------------------------------------------------------------
// Excluded radii.

ExcludedRadiusReport excluded_radii(const FluidParams& params, const AnnularGeometry& geom,
                                    const ExcludedRadiusOptions& options) {
  params.validate();
  geom.validate();
  if (!(options.tol > 0)) throw std::invalid_argument("excluded_radii: tol must be positive");
  if (options.num_eigs < 1 || options.num_zeros < 1) {
    throw std::invalid_argument("excluded_radii: need at least one eigenvalue and one zero");
  }

  const std::vector<double> zeros = bessel_zeros(1, options.num_zeros).zeros;
  ExcludedRadiusReport report;
  report.tolerance = options.tol;
  report.params = params;
  report.geom = geom;
  report.options = options;
  report.provenance = "analytic swirl branch";

  auto pair_with_zeros = [&](const SpectrumResult& spectrum, bool swirl) {
    for (std::size_t k = 0; k < spectrum.entries.size(); ++k) {
      const SpectrumEntry& entry = spectrum.entries[k];
      for (std::size_t l = 0; l < zeros.size(); ++l) {
        ExcludedRadiusMatch match;
        match.lambda = entry.lambda;
        match.lambda_mode = entry.mode;
        match.lambda_index = static_cast<int>(k) + 1;
        match.branch = entry.branch;
        match.zero_index = static_cast<int>(l) + 1;
        match.zero = zeros[l];
        match.predicted_radius = std::sqrt(params.nu_minus / entry.lambda) * zeros[l];
        match.gap = std::abs(geom.r_s - match.predicted_radius);
        match.self_match = swirl && k == l;
        if (match.gap < options.tol) report.matches.push_back(match);
      }
    }
  };

  pair_with_zeros(swirl_spectrum_analytic(params, geom, options.num_eigs), true);
  for (int m = 1; m <= options.max_mode; ++m) {
    pair_with_zeros(stokes_spectrum_numeric(m, params, geom, options.grid, options.num_eigs,
                                            StokesSide::kInner),
                    false);
  }
  if (options.max_mode >= 1) {
    report.provenance += " + numeric inner modes 1.." + std::to_string(options.max_mode) +
                         " (N=" + std::to_string(options.grid) + ")";
  }
  std::stable_sort(report.matches.begin(), report.matches.end(),
                   [](const auto& a, const auto& b) { return a.gap < b.gap; });
  return report;
}

// ---------------------------------------------------------------------------
// Duality.

Eigen::VectorXd seeded_normal(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = normal(rng);
  return v;
}

DualityReport duality_check(const ModeStepper& stepper, const Eigen::Matrix2Xd& controls,
                            const Eigen::VectorXd& terminal) {
  const int steps = static_cast<int>(controls.cols());
  if (steps < 1) throw std::invalid_argument("duality_check: need at least one step");
  const double weight = stepper.system().interface_weight;

  SimulationInput input;
  input.controls = controls;
  input.steps = steps;
  const Eigen::VectorXd x_final = simulate_terminal(stepper, input);
  const std::vector<Eigen::VectorXd> ys = simulate_adjoint(stepper, terminal, steps);

  DualityReport report;
  report.mode = stepper.system().mode;
  report.steps = steps;
  report.horizon = steps * stepper.dt();
  report.lhs = terminal.dot(stepper.pairing() * x_final);

  // -sum <g_k, zeta_k - zeta_{k-1}>, the discrete -int <g, d zeta/dt> dt.
  double rhs = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const Eigen::Vector2d dzeta = ys[k].tail(2) - ys[k - 1].tail(2);
    rhs -= weight * controls.col(k - 1).dot(dzeta);
  }
  report.rhs = rhs;

  // Same quantity through the transposed map: sum lambda_k^T (response to g_k).
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(stepper.state_size());
  Eigen::VectorXd lambda = stepper.pairing() * terminal;
  double rhs_t = 0.0;
  for (int k = steps; k >= 1; --k) {
    rhs_t += lambda.dot(stepper.step(zero, controls.col(k - 1)));
    lambda = stepper.apply_transpose(lambda);
  }
  report.rhs_transpose = rhs_t;
  report.residual =
      std::abs(report.lhs - report.rhs) / (std::abs(report.lhs) + std::abs(report.rhs) + 1e-30);
  return report;
}

DualityReport duality_check(const FluidParams& params, const AnnularGeometry& geom,
                            const DualityOptions& options) {
  if (options.steps < 1) throw std::invalid_argument("duality_check: steps must be >= 1");
  ModeStepper stepper(assemble_mode_system(options.mode, params, geom, Domain::kTwoPhase,
                                           options.n_inner, options.n_outer),
                      options.horizon / options.steps);
  const int n = stepper.state_size();
  const Eigen::VectorXd draw = seeded_normal(2 * options.steps + n, options.seed);
  const Eigen::Matrix2Xd controls = draw.head(2 * options.steps).reshaped(2, options.steps);
  const Eigen::VectorXd terminal = draw.tail(n);
  DualityReport report = duality_check(stepper, controls, terminal);
  report.seed = options.seed;
  return report;
}

// ---------------------------------------------------------------------------
// Reachable map.

Eigen::Matrix2d translation_quotient(int mode) {
  if (mode != 1) return Eigen::Matrix2d::Identity();
  const Eigen::Vector2d t = Eigen::Vector2d(1.0, 1.0).normalized();
  return Eigen::Matrix2d::Identity() - t * t.transpose();
}

Eigen::MatrixXd reachable_map(const ModeStepper& stepper, int steps, int slabs) {
  const int nc = stepper.velocity_size();
  const Eigen::LLT<Eigen::MatrixXd> chol(stepper.reduced().mass);
  const Eigen::MatrixXd upper = chol.matrixU();
  const Eigen::Matrix2d quotient =
      std::sqrt(stepper.system().interface_weight) * translation_quotient(stepper.system().mode);

  Eigen::MatrixXd map(nc + 2, 2 * slabs);
  for (int s = 0; s < slabs; ++s) {
    for (int d = 0; d < 2; ++d) {
      SimulationInput input;
      input.steps = steps;
      input.controls = Eigen::Matrix2Xd::Zero(2, steps);
      for (int k = 1; k <= steps; ++k) {
        if (static_cast<long>(k - 1) * slabs / steps == s) input.controls(d, k - 1) = 1.0;
      }
      const Eigen::VectorXd x = simulate_terminal(stepper, input);
      map.col(2 * s + d).head(nc) = upper * x.head(nc);
      map.col(2 * s + d).tail(2) = quotient * x.tail(2);
    }
  }
  return map;
}

GramianReport gramian_report(const GramianOptions& options, double radius) {
  if (options.steps < 1) throw std::invalid_argument("gramian: steps must be >= 1");
  if (options.slabs < 0 || options.slabs > options.steps) {
    throw std::invalid_argument("gramian: slabs must lie in [0, steps]");
  }
  const AnnularGeometry geom{radius, options.outer_radius};
  ModeStepper stepper(assemble_mode_system(options.mode, options.params, geom, Domain::kTwoPhase,
                                           options.n_inner, options.n_outer),
                      options.horizon / options.steps);

  GramianReport report;
  report.mode = options.mode;
  report.radius = radius;
  report.horizon = options.horizon;
  report.steps = options.steps;
  report.slabs = options.slabs;
  report.n_inner = options.n_inner;
  report.n_outer = options.n_outer;
  report.control_basis = std::to_string(options.slabs) +
                         " time slabs x {normal, azimuthal} at mode " + std::to_string(options.mode);
  if (options.slabs == 0) {
    report.singular_values = Eigen::VectorXd();
    return report;
  }
  const Eigen::MatrixXd map = reachable_map(stepper, options.steps, options.slabs);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map);
  report.singular_values = svd.singularValues();
  report.sigma_max = report.singular_values.maxCoeff();
  report.sigma_min = report.singular_values.minCoeff();
  return report;
}

std::vector<GramianReport> gramian_scan(const GramianOptions& options,
                                        const std::vector<double>& radii) {
  for (double r : radii) {
    if (!(r > 0 && r < options.outer_radius)) {
      throw std::invalid_argument("gramian_scan: radii must lie in (0, R)");
    }
  }
  std::vector<GramianReport> reports(radii.size());
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < radii.size(); ++i) reports[i] = gramian_report(options, radii[i]);
    return reports;
  }
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < radii.size(); i += workers) {
        reports[i] = gramian_report(options, radii[i]);
      }
    }));
  }
  for (auto& job : jobs) job.get();
  return reports;
}

// ---------------------------------------------------------------------------
// Steady adjoint energy identity.

namespace {

// Second-order derivative along a non-uniform coordinate.
Eigen::VectorXd radial_derivative(const Eigen::VectorXd& r, const Eigen::VectorXd& f) {
  const Eigen::Index n = r.size();
  Eigen::VectorXd d(n);
  auto three_point = [&](Eigen::Index i0, Eigen::Index at) {
    const double x0 = r[i0], x1 = r[i0 + 1], x2 = r[i0 + 2];
    const double x = r[at];
    const double c0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double c1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double c2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    return c0 * f[i0] + c1 * f[i0 + 1] + c2 * f[i0 + 2];
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index i0 = std::clamp<Eigen::Index>(i - 1, 0, n - 3);
    d[i] = three_point(i0, i);
  }
  return d;
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& r) {
  const Eigen::Index n = r.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = r[i + 1] - r[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

double strain_energy(const PolarSamples& field) {
  const Eigen::Index nr = field.radii.size();
  const int nt = field.angular();
  if (nr < 3 || nt < 8 || nt % 2 != 0) {
    throw std::invalid_argument("strain_energy: need >= 3 radii and an even angular grid >= 8");
  }
  Eigen::MatrixXd dr_x(nr, nt), dr_y(nr, nt), dt_x(nr, nt), dt_y(nr, nt);
  for (int j = 0; j < nt; ++j) {
    dr_x.col(j) = radial_derivative(field.radii, field.vx.col(j));
    dr_y.col(j) = radial_derivative(field.radii, field.vy.col(j));
  }
  for (Eigen::Index i = 0; i < nr; ++i) {
    Samples2<double> row(nt, 2);
    row.col(0) = field.vx.row(i).transpose();
    row.col(1) = field.vy.row(i).transpose();
    const Samples2<double> d = internal::periodic_derivative(row, 1);
    dt_x.row(i) = d.col(0).transpose();
    dt_y.row(i) = d.col(1).transpose();
  }
  const Eigen::VectorXd wr = trapezoid_weights(field.radii);
  const double wt = 2 * std::numbers::pi / nt;
  double total = 0.0;
  for (Eigen::Index i = 0; i < nr; ++i) {
    const double r = field.radii[i];
    for (int j = 0; j < nt; ++j) {
      const double theta = 2 * std::numbers::pi * j / nt;
      const double c = std::cos(theta), s = std::sin(theta);
      auto dx = [&](double fr, double ft) { return c * fr - s / r * ft; };
      auto dy = [&](double fr, double ft) { return s * fr + c / r * ft; };
      const double exx = dx(dr_x(i, j), dt_x(i, j));
      const double eyy = dy(dr_y(i, j), dt_y(i, j));
      const double exy = 0.5 * (dy(dr_x(i, j), dt_x(i, j)) + dx(dr_y(i, j), dt_y(i, j)));
      total += wr[i] * r * wt * (exx * exx + eyy * eyy + 2 * exy * exy);
    }
  }
  return total;
}

std::string to_string(EnergyConclusion conclusion) {
  switch (conclusion) {
    case EnergyConclusion::kNonzeroEnergy: return "nonzero-energy";
    case EnergyConclusion::kTranslation: return "translation";
    case EnergyConclusion::kInconsistent: return "inconsistent";
  }
  return "inconsistent";
}

namespace {

RigidMotionFit fit_polar(const PolarSamples& field) {
  const Eigen::Index nr = field.radii.size();
  const int nt = field.angular();
  Eigen::MatrixX2d nodes(nr * nt, 2), values(nr * nt, 2);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double theta = 2 * std::numbers::pi * j / nt;
      const Eigen::Index row = i * nt + j;
      nodes.row(row) << field.radii[i] * std::cos(theta), field.radii[i] * std::sin(theta);
      values.row(row) << field.vx(i, j), field.vy(i, j);
    }
  }
  return rigid_motion_fit(nodes, values);
}

double trace_on(const PolarSamples& field, double radius) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < field.radii.size(); ++i) {
    if (std::abs(field.radii[i] - radius) <= 1e-12 * radius) {
      worst = std::max(worst, (field.vx.row(i).array().square() + field.vy.row(i).array().square())
                                  .sqrt()
                                  .maxCoeff());
    }
  }
  return worst;
}

}  // namespace

EnergyTriple steady_adjoint_energy_check(const PolarSamples& phi_minus,
                                         const PolarSamples& phi_plus,
                                         const SurfaceField<double>& z_terminal,
                                         const FluidParams& params, double tol) {
  EnergyTriple out;
  out.outer_viscous = params.nu_plus * strain_energy(phi_plus);
  out.inner_viscous = params.nu_minus * strain_energy(phi_minus);
  out.interface = params.mu * surface_dirichlet_energy(z_terminal);
  const double r_s = z_terminal.radius();
  out.interface_trace = std::max(trace_on(phi_minus, r_s), trace_on(phi_plus, r_s));
  const Eigen::RowVector2d mean = z_terminal.samples().colwise().mean();
  out.translation_spread =
      (z_terminal.samples().rowwise() - mean).rowwise().norm().maxCoeff();

  if (out.outer_viscous > tol || out.inner_viscous > tol || out.interface > tol) {
    out.conclusion = EnergyConclusion::kNonzeroEnergy;
    return out;
  }
  out.inner_fit = fit_polar(phi_minus);
  out.outer_fit = fit_polar(phi_plus);
  // The fields are assumed to vanish on the interface, and a rigid motion
  // that vanishes on a circle is zero.
  const double fit_tol = std::sqrt(tol);
  auto vanishes = [&](const RigidMotionFit& f) {
    return f.h.norm() <= fit_tol && std::abs(f.omega) * r_s <= fit_tol;
  };
  // |Z - mean| <= int |Z'| ds <= sqrt(2 pi r_s ||Z'||^2).
  const double spread_tol = std::sqrt(2 * std::numbers::pi * r_s * tol / params.mu) + 1e-12;
  const bool ok = out.interface_trace <= fit_tol && vanishes(out.inner_fit) && vanishes(out.outer_fit) &&
                  out.translation_spread <= spread_tol;
  out.conclusion = ok ? EnergyConclusion::kTranslation : EnergyConclusion::kInconsistent;
  return out;
}

}  // namespace bubble
