#include "bubble/radial_stokes.hpp"

#include <algorithm>
#include <numbers>
#include <utility>

#include "bubble/specfun.hpp"

namespace bubble {

RadialGrid RadialGrid::disk(double radius, int intervals) {
  if (intervals < 3) throw std::invalid_argument("RadialGrid::disk: need at least 3 intervals");
  RadialGrid grid;
  grid.axis_offset = true;
  grid.spacing = radius / (intervals + 0.5);
  grid.nodes.resize(intervals + 1);
  for (int j = 0; j <= intervals; ++j) grid.nodes[j] = (j + 0.5) * grid.spacing;
  grid.nodes[intervals] = radius;
  return grid;
}

RadialGrid RadialGrid::annulus(double inner, double outer, int intervals) {
  if (intervals < 3) throw std::invalid_argument("RadialGrid::annulus: need at least 3 intervals");
  if (!(inner > 0 && inner < outer)) throw std::invalid_argument("RadialGrid::annulus: need 0 < inner < outer");
  RadialGrid grid;
  grid.spacing = (outer - inner) / intervals;
  grid.nodes.resize(intervals + 1);
  for (int j = 0; j <= intervals; ++j) grid.nodes[j] = inner + j * grid.spacing;
  grid.nodes[intervals] = outer;
  return grid;
}

// ---------------------------------------------------------------------------
// Strong form.

namespace {

struct Derivatives {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

Derivatives differentiate(const RadialGrid& grid, const Eigen::VectorXd& f, int parity) {
  const int n = static_cast<int>(f.size());
  const double h = grid.spacing;
  Derivatives d{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  auto value = [&](int j) { return j < 0 ? parity * f[-j - 1] : f[j]; };
  for (int j = 0; j < n; ++j) {
    const bool centred = j < n - 1 && (j > 0 || grid.axis_offset);
    if (centred) {
      d.first[j] = (value(j + 1) - value(j - 1)) / (2 * h);
      d.second[j] = (value(j + 1) - 2 * value(j) + value(j - 1)) / (h * h);
    } else if (j == 0) {
      d.first[j] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
      d.second[j] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
    } else {
      d.first[j] = (3 * f[j] - 4 * f[j - 1] + f[j - 2]) / (2 * h);
      d.second[j] = (2 * f[j] - 5 * f[j - 1] + 4 * f[j - 2] - f[j - 3]) / (h * h);
    }
  }
  return d;
}

}  // namespace

PolarResidual polar_stokes_apply(int mode, const RadialGrid& grid, double nu,
                                 const Eigen::Ref<const Eigen::VectorXd>& v_r,
                                 const Eigen::Ref<const Eigen::VectorXd>& v_theta,
                                 const Eigen::Ref<const Eigen::VectorXd>& q) {
  const Eigen::Index n = grid.nodes.size();
  if (v_r.size() != n || v_theta.size() != n || q.size() != n) {
    throw std::invalid_argument("polar_stokes_apply: profile sizes must match the grid");
  }
  if (n < 4) throw std::invalid_argument("polar_stokes_apply: need at least 4 nodes");
  const int vp = velocity_axis_parity(mode);
  const Derivatives da = differentiate(grid, v_r, vp);
  const Derivatives db = differentiate(grid, v_theta, vp);
  const Derivatives dq = differentiate(grid, q, pressure_axis_parity(mode));
  const double m = mode;
  const Eigen::ArrayXd r = grid.nodes.array();
  const Eigen::ArrayXd a = v_r.array();
  const Eigen::ArrayXd b = v_theta.array();

  PolarResidual out;
  out.radial = (-nu * (da.second.array() + da.first.array() / r - (1 + m * m) * a / (r * r) +
                       2 * m * b / (r * r)) +
                dq.first.array())
                   .matrix();
  out.azimuthal = (-nu * (db.second.array() + db.first.array() / r -
                          (1 + m * m) * b / (r * r) + 2 * m * a / (r * r)) +
                   m * q.array() / r)
                      .matrix();
  out.divergence = (da.first.array() + a / r - m * b / r).matrix();
  return out;
}

// ---------------------------------------------------------------------------
// Weak-form assembly.

Eigen::Matrix2d modal_surface_laplacian(int mode, double radius) {
  const double m = mode;
  Eigen::Matrix2d l;
  l << -(1 + m * m), 2 * m, 2 * m, -(1 + m * m);
  return l / (radius * radius);
}

namespace {

using Functional = std::vector<std::pair<int, double>>;
using Triplets = std::vector<Eigen::Triplet<double>>;

void add(Functional& f, int dof, double coef) {
  if (dof >= 0 && coef != 0.0) f.emplace_back(dof, coef);
}

Functional combine(const Functional& x, double sx, const Functional& y, double sy) {
  Functional out;
  for (const auto& [d, c] : x) add(out, d, sx * c);
  for (const auto& [d, c] : y) add(out, d, sy * c);
  return out;
}

void add_square(Triplets& t, const Functional& f, double weight) {
  for (const auto& [i, ci] : f) {
    for (const auto& [j, cj] : f) t.emplace_back(i, j, weight * ci * cj);
  }
}

struct Segment {
  const RadialGrid* grid;
  const std::vector<int>* a_map;
  const std::vector<int>* b_map;
  double nu;
};

// Adds the viscous form and one divergence row per cell of `seg`.
void assemble_segment(const Segment& seg, int mode, Triplets& stiffness, Triplets& divergence,
                      int& next_row) {
  const RadialGrid& grid = *seg.grid;
  const auto& a_map = *seg.a_map;
  const auto& b_map = *seg.b_map;
  const double m = mode;
  const int parity = velocity_axis_parity(mode);
  const double two_pi = 2 * std::numbers::pi;

  // left == -1 marks the virtual axis node at r = 0.
  std::vector<int> lefts;
  if (grid.axis_offset) lefts.push_back(-1);
  for (int j = 0; j < grid.intervals(); ++j) lefts.push_back(j);

  for (int left : lefts) {
    const int right = left + 1;
    const double rl = left < 0 ? 0.0 : grid.nodes[left];
    const double rr = grid.nodes[right];
    const double hc = rr - rl;
    const double rm = 0.5 * (rl + rr);

    auto average = [&](const std::vector<int>& map) {
      Functional f;
      add(f, map[right], 0.5);
      if (left >= 0) add(f, map[left], 0.5);
      else if (parity > 0) add(f, map[right], 0.5);
      return f;
    };
    auto slope = [&](const std::vector<int>& map) {
      Functional f;
      add(f, map[right], 1.0 / hc);
      if (left >= 0) add(f, map[left], -1.0 / hc);
      else if (parity > 0) add(f, map[right], -1.0 / hc);
      return f;
    };
    const Functional a_avg = average(a_map);
    const Functional b_avg = average(b_map);
    const Functional a_slope = slope(a_map);
    const Functional b_slope = slope(b_map);

    const Functional e_rr = a_slope;
    const Functional e_tt = combine(a_avg, 1.0 / rm, b_avg, -m / rm);
    const Functional e_rt = combine(combine(b_slope, 1.0, b_avg, -1.0 / rm), 1.0, a_avg, m / rm);
    const double w = 2 * seg.nu * two_pi * rm * hc;
    add_square(stiffness, e_rr, w);
    add_square(stiffness, e_tt, w);
    add_square(stiffness, e_rt, 0.5 * w);  // |eps_rt|^2 enters twice with a factor 1/4

    Functional div;
    add(div, a_map[right], rr / hc);
    if (left >= 0) add(div, a_map[left], -rl / hc);
    div = combine(div, 1.0, b_avg, -m);
    for (const auto& [dof, c] : div) divergence.emplace_back(next_row, dof, two_pi * hc * c);
    ++next_row;
  }
}

Eigen::VectorXd profile(const std::vector<int>& map, const Eigen::VectorXd& u) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.size()));
  for (std::size_t j = 0; j < map.size(); ++j) {
    if (map[j] >= 0) out[static_cast<Eigen::Index>(j)] = u[map[j]];
  }
  return out;
}

}  // namespace

Eigen::VectorXd ModeSystem::inner_profile_a(const Eigen::VectorXd& u) const { return profile(inner_a, u); }
Eigen::VectorXd ModeSystem::inner_profile_b(const Eigen::VectorXd& u) const { return profile(inner_b, u); }
Eigen::VectorXd ModeSystem::outer_profile_a(const Eigen::VectorXd& u) const { return profile(outer_a, u); }
Eigen::VectorXd ModeSystem::outer_profile_b(const Eigen::VectorXd& u) const { return profile(outer_b, u); }

ModeSystem assemble_mode_system(int mode, const FluidParams& params, const AnnularGeometry& geom,
                                Domain domain, int n_inner, int n_outer,
                                bool density_weighted) {
  if (mode < 0) throw std::invalid_argument("assemble_mode_system: mode must be >= 0");
  params.validate();
  geom.validate();

  ModeSystem sys;
  sys.mode = mode;
  sys.domain = domain;
  sys.params = params;
  sys.geom = geom;
  sys.density_weighted = density_weighted;
  const bool has_inner = domain != Domain::kOuterAnnulus;
  const bool has_outer = domain != Domain::kInnerDisk;
  if (has_inner) {
    sys.inner = RadialGrid::disk(geom.r_s, n_inner);
    sys.inner_a.assign(n_inner + 1, -1);
    sys.inner_b.assign(n_inner + 1, -1);
  }
  if (has_outer) {
    sys.outer = RadialGrid::annulus(geom.r_s, geom.R, n_outer);
    sys.outer_a.assign(n_outer + 1, -1);
    sys.outer_b.assign(n_outer + 1, -1);
  }

  // Unknown ordering: inner a, inner b, interface (a, b), outer a, outer b.
  int next = 0;
  if (has_inner) {
    for (int j = 0; j < n_inner; ++j) sys.inner_a[j] = next++;
    for (int j = 0; j < n_inner; ++j) sys.inner_b[j] = next++;
  }
  int interface_a = -1;
  int interface_b = -1;
  if (domain == Domain::kTwoPhase) {
    interface_a = next++;
    interface_b = next++;
    sys.inner_a[n_inner] = sys.outer_a[0] = interface_a;
    sys.inner_b[n_inner] = sys.outer_b[0] = interface_b;
  }
  if (has_outer) {
    for (int j = 1; j < n_outer; ++j) sys.outer_a[j] = next++;
    for (int j = 1; j < n_outer; ++j) sys.outer_b[j] = next++;
  }
  const int nv = next;

  const double two_pi = 2 * std::numbers::pi;
  sys.mass = Eigen::VectorXd::Zero(nv);
  auto add_mass = [&](const RadialGrid& grid, const std::vector<int>& a, const std::vector<int>& b,
                      double rho) {
    const double density = density_weighted ? rho : 1.0;
    const int n = grid.intervals();
    for (int j = 0; j <= n; ++j) {
      double w = grid.nodes[j] * grid.spacing;
      if (j == n || (j == 0 && !grid.axis_offset)) w *= 0.5;
      if (a[j] >= 0) sys.mass[a[j]] += two_pi * density * w;
      if (b[j] >= 0) sys.mass[b[j]] += two_pi * density * w;
    }
  };

  Triplets k_trip;
  Triplets d_trip;
  int rows = 0;
  if (has_inner) {
    add_mass(sys.inner, sys.inner_a, sys.inner_b, params.rho_minus);
    assemble_segment({&sys.inner, &sys.inner_a, &sys.inner_b, params.nu_minus}, mode, k_trip, d_trip,
                     rows);
  }
  if (has_outer) {
    add_mass(sys.outer, sys.outer_a, sys.outer_b, params.rho_plus);
    assemble_segment({&sys.outer, &sys.outer_a, &sys.outer_b, params.nu_plus}, mode, k_trip, d_trip,
                     rows);
  }
  sys.stiffness.resize(nv, nv);
  sys.stiffness.setFromTriplets(k_trip.begin(), k_trip.end());
  sys.divergence.resize(rows, nv);
  sys.divergence.setFromTriplets(d_trip.begin(), d_trip.end());

  sys.trace.resize(2, nv);
  if (domain == Domain::kTwoPhase) {
    Triplets t{{0, interface_a, 1.0}, {1, interface_b, 1.0}};
    sys.trace.setFromTriplets(t.begin(), t.end());
    sys.surface_laplacian = modal_surface_laplacian(mode, geom.r_s);
    sys.interface_weight = two_pi * geom.r_s;
  }
  return sys;
}

Eigen::SparseMatrix<double> ModeSystem::dae_mass() const {
  const int nv = num_velocity();
  const int nc = num_constraints();
  const int nz = has_interface() ? 2 : 0;
  Triplets t;
  for (int i = 0; i < nv; ++i) t.emplace_back(i, i, mass[i]);
  for (int i = 0; i < nz; ++i) t.emplace_back(nv + nc + i, nv + nc + i, 1.0);
  Eigen::SparseMatrix<double> e(nv + nc + nz, nv + nc + nz);
  e.setFromTriplets(t.begin(), t.end());
  return e;
}

Eigen::SparseMatrix<double> ModeSystem::dae_dynamics() const {
  const int nv = num_velocity();
  const int nc = num_constraints();
  const int nz = has_interface() ? 2 : 0;
  Triplets t;
  for (int k = 0; k < stiffness.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness, k); it; ++it) {
      t.emplace_back(it.row(), it.col(), -it.value());
    }
  }
  for (int k = 0; k < divergence.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(divergence, k); it; ++it) {
      t.emplace_back(it.col(), nv + it.row(), it.value());  // D^T p
      t.emplace_back(nv + it.row(), it.col(), it.value());  // 0 = D U
    }
  }
  if (nz > 0) {
    const Eigen::Matrix2d coupling = params.mu * interface_weight * surface_laplacian;
    for (int k = 0; k < trace.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(trace, k); it; ++it) {
        for (int c = 0; c < 2; ++c) {
          t.emplace_back(it.col(), nv + nc + c, it.value() * coupling(it.row(), c));
        }
        t.emplace_back(nv + nc + it.row(), it.col(), it.value());  // Z' = T U
      }
    }
  }
  Eigen::SparseMatrix<double> a(nv + nc + nz, nv + nc + nz);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::SparseMatrix<double> ModeSystem::dae_control() const {
  const int nv = num_velocity();
  const int nc = num_constraints();
  const int nz = has_interface() ? 2 : 0;
  Triplets t;
  for (int k = 0; k < trace.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(trace, k); it; ++it) {
      t.emplace_back(it.col(), it.row(), interface_weight * it.value());
    }
  }
  Eigen::SparseMatrix<double> b(nv + nc + nz, 2);
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

ReducedModeSystem reduce(const ModeSystem& system) {
  const Eigen::MatrixXd dt = Eigen::MatrixXd(system.divergence).transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dt);
  const int nv = system.num_velocity();
  const int rank = static_cast<int>(qr.rank());
  const Eigen::MatrixXd q = qr.householderQ();

  ReducedModeSystem reduced;
  reduced.basis = q.rightCols(nv - rank);
  reduced.mass = reduced.basis.transpose() * system.mass.asDiagonal() * reduced.basis;
  reduced.stiffness = reduced.basis.transpose() * (system.stiffness * reduced.basis);
  reduced.mass = 0.5 * (reduced.mass + reduced.mass.transpose()).eval();
  reduced.stiffness = 0.5 * (reduced.stiffness + reduced.stiffness.transpose()).eval();
  reduced.trace = system.trace * reduced.basis;
  return reduced;
}

// ---------------------------------------------------------------------------
// Spectra.

std::string to_string(SpectrumBranch branch) {
  switch (branch) {
    case SpectrumBranch::kSwirl: return "swirl";
    case SpectrumBranch::kAnalytic: return "analytic";
    case SpectrumBranch::kNumeric: return "numeric";
  }
  return "numeric";
}

std::string to_string(StokesSide side) {
  switch (side) {
    case StokesSide::kInner: return "inner";
    case StokesSide::kOuter: return "outer";
    case StokesSide::kCoupled: return "coupled";
  }
  return "inner";
}

StokesSide parse_stokes_side(const std::string& text) {
  if (text == "inner") return StokesSide::kInner;
  if (text == "outer") return StokesSide::kOuter;
  if (text == "coupled") return StokesSide::kCoupled;
  throw std::invalid_argument("unknown side '" + text + "' (expected inner, outer or coupled)");
}

SpectrumResult swirl_spectrum_analytic(const FluidParams& params, const AnnularGeometry& geom,
                                       int count) {
  if (count < 1) throw std::invalid_argument("swirl_spectrum_analytic: count must be >= 1");
  const BesselZeroTable zeros = bessel_zeros(1, count);
  SpectrumResult result;
  result.provenance = "analytic";
  for (int k = 0; k < count; ++k) {
    const double scaled = zeros.zeros[k] / geom.r_s;
    result.entries.push_back({params.nu_minus * scaled * scaled, 0, SpectrumBranch::kAnalytic, -1, 0.0});
  }
  return result;
}

SpectrumResult stokes_spectrum_numeric(int mode, const FluidParams& params,
                                       const AnnularGeometry& geom, int grid, int count,
                                       StokesSide side) {
  if (grid < 32) throw std::invalid_argument("stokes_spectrum_numeric: grid must be >= 32");
  if (count < 1) throw std::invalid_argument("stokes_spectrum_numeric: count must be >= 1");
  const Domain domain = side == StokesSide::kInner   ? Domain::kInnerDisk
                        : side == StokesSide::kOuter ? Domain::kOuterAnnulus
                                                     : Domain::kTwoPhase;
  const ModeSystem sys = assemble_mode_system(mode, params, geom, domain, grid, grid, false);
  const ReducedModeSystem red = reduce(sys);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(red.stiffness, red.mass);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("stokes_spectrum_numeric: eigensolver failed for mode " +
                             std::to_string(mode) + ", grid " + std::to_string(grid));
  }
  const int available = static_cast<int>(solver.eigenvalues().size());
  const int take = std::min(count, available);

  SpectrumResult result;
  result.grid = grid;
  result.provenance = "numeric:" + to_string(side) + ":N=" + std::to_string(grid);
  result.eigenvectors.resize(sys.num_velocity(), take);
  const bool swirl = mode == 0 && side == StokesSide::kInner;
  for (int k = 0; k < take; ++k) {
    const double lambda = solver.eigenvalues()[k];
    const Eigen::VectorXd v = solver.eigenvectors().col(k);
    const Eigen::VectorXd mv = red.mass * v;
    const double residual = (red.stiffness * v - lambda * mv).norm() / (std::abs(lambda) * mv.norm());
    result.eigenvectors.col(k) = red.basis * v;
    result.entries.push_back(
        {lambda, mode, swirl ? SpectrumBranch::kSwirl : SpectrumBranch::kNumeric, k, residual});
  }
  return result;
}

double spectral_symmetry_defect(const ReducedModeSystem& reduced) {
  const Eigen::MatrixXd op = reduced.mass.ldlt().solve(reduced.stiffness);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(op, false);
  double worst = 0.0;
  for (const auto& lambda : solver.eigenvalues()) {
    worst = std::max(worst, std::abs(lambda.imag()) / std::max(std::abs(lambda), 1e-300));
  }
  return worst;
}

double continuation_residual(double lambda, const FluidParams& params, const AnnularGeometry& geom) {
  if (!(lambda > 0)) throw std::invalid_argument("continuation_residual: lambda must be positive");
  return std::abs(bessel_j(1, std::sqrt(lambda / params.nu_minus) * geom.r_s));
}

}  // namespace bubble
