#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bubble/mode_dynamics.hpp"
#include "bubble/radial_stokes.hpp"
#include "bubble/surface_geometry.hpp"

namespace bubble {

// ---------------------------------------------------------------------------
// Excluded radii.

struct ExcludedRadiusMatch {
  double lambda = 0.0;
  int lambda_mode = 0;
  int lambda_index = 0;  ///< 1-based within its branch
  SpectrumBranch branch = SpectrumBranch::kAnalytic;
  int zero_index = 0;    ///< 1-based index of the J_1 zero
  double zero = 0.0;
  double predicted_radius = 0.0;  ///< sqrt(nu- / lambda) * zero
  double gap = 0.0;               ///< |r_s - predicted_radius|
  bool self_match = false;        ///< swirl eigenvalue paired with its own zero
};

struct ExcludedRadiusOptions {
  int num_eigs = 5;   ///< eigenvalues per branch
  int num_zeros = 5;
  double tol = 1e-3;
  int max_mode = 2;   ///< numeric branches for modes 1..max_mode (0 disables)
  int grid = 64;
};

struct ExcludedRadiusReport {
  std::vector<ExcludedRadiusMatch> matches;  ///< gap ascending
  double tolerance = 0.0;
  std::string provenance;
  FluidParams params;
  AnnularGeometry geom;
  ExcludedRadiusOptions options;
};

/// Pairs every eigenvalue of the inner Stokes operator (analytic swirl branch
/// plus numeric branches) with the first J_1 zeros and reports those whose
/// predicted radius sqrt(nu- / lambda) r_0 lies within `tol` of r_s. Swirl
/// pairs (lambda_k, z_k) reproduce r_s identically and are flagged, not
/// filtered.
ExcludedRadiusReport excluded_radii(const FluidParams& params, const AnnularGeometry& geom,
                                    const ExcludedRadiusOptions& options);

// ---------------------------------------------------------------------------
// Forward/adjoint duality.

struct DualityReport {
  int mode = 0;
  double horizon = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  double lhs = 0.0;            ///< rho <phi_T, u(T)> - mu <grad Z_T, grad Z(T)>
  double rhs = 0.0;            ///< -sum_k <g_k, zeta_k - zeta_{k-1}>_Gamma
  double rhs_transpose = 0.0;  ///< sum_k lambda_k^T Gamma g_k
  double residual = 0.0;       ///< |lhs - rhs| / (|lhs| + |rhs| + 1e-30)
};

/// Duality identity for given controls (2 x steps) and terminal adjoint data
/// y_N = [phi_T; Z_T] in reduced coordinates. The forward run starts from
/// zero.
DualityReport duality_check(const ModeStepper& stepper, const Eigen::Matrix2Xd& controls,
                            const Eigen::VectorXd& terminal);

struct DualityOptions {
  int mode = 2;
  double horizon = 0.5;
  int steps = 100;
  std::uint64_t seed = 1;
  int n_inner = 64;
  int n_outer = 64;
};

/// Seeded version: draws g and the terminal data from N(0, 1).
DualityReport duality_check(const FluidParams& params, const AnnularGeometry& geom,
                            const DualityOptions& options);

/// Normally distributed vector from a seeded Mersenne twister.
Eigen::VectorXd seeded_normal(int size, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reachable map.

struct GramianOptions {
  int mode = 2;
  FluidParams params;
  double outer_radius = 2.0;
  double horizon = 0.5;
  int steps = 50;
  int slabs = 4;  ///< piecewise-constant time slabs; 0 gives an empty basis
  int n_inner = 64;
  int n_outer = 64;
  int workers = 1;
};

struct GramianReport {
  int mode = 0;
  double radius = 0.0;
  double horizon = 0.0;
  int steps = 0;
  int slabs = 0;
  int n_inner = 0;
  int n_outer = 0;
  std::string control_basis;
  Eigen::VectorXd singular_values;  ///< descending
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Columns are terminal states from zero data under unit controls, one per
/// (slab, direction) with direction in {normal, azimuthal}, in that order.
/// Rows are weighted so that the Euclidean norm is the L2 norm of (u, Z):
/// [chol(M_r)^T c; sqrt(W) Q Z], where Q removes the rigid translation
/// direction of mode 1.
Eigen::MatrixXd reachable_map(const ModeStepper& stepper, int steps, int slabs);

/// Projector onto the complement of rigid translations in the modal (F, G)
/// displacement: identity except for mode 1, where (1, 1) is a translation.
Eigen::Matrix2d translation_quotient(int mode);

GramianReport gramian_report(const GramianOptions& options, double radius);

/// Radius sweep; radii are processed on `options.workers` threads and the
/// reports are returned in input order.
std::vector<GramianReport> gramian_scan(const GramianOptions& options,
                                        const std::vector<double>& radii);

// ---------------------------------------------------------------------------
// Steady adjoint energy identity.

/// Cartesian vector samples on a polar tensor grid: row i is radius
/// radii[i], column j is theta_j = 2 pi j / angular.
struct PolarSamples {
  Eigen::VectorXd radii;
  Eigen::MatrixXd vx;
  Eigen::MatrixXd vy;

  int angular() const { return static_cast<int>(vx.cols()); }

  template <typename F>
  static PolarSamples Sample(const Eigen::VectorXd& radii, int angular, F&& f) {
    PolarSamples s{radii, Eigen::MatrixXd(radii.size(), angular),
                   Eigen::MatrixXd(radii.size(), angular)};
    for (Eigen::Index i = 0; i < radii.size(); ++i) {
      for (int j = 0; j < angular; ++j) {
        const double theta = 2 * std::numbers::pi * j / angular;
        const Eigen::Vector2d y(radii[i] * std::cos(theta), radii[i] * std::sin(theta));
        const Eigen::Vector2d v = f(y);
        s.vx(i, j) = v.x();
        s.vy(i, j) = v.y();
      }
    }
    return s;
  }
};

/// int |eps(v)|^2 dA by second-order differences in r, spectral
/// differentiation in theta and the trapezoidal rule.
double strain_energy(const PolarSamples& field);

enum class EnergyConclusion {
  kNonzeroEnergy,     ///< some term exceeds tol
  kTranslation,       ///< rigid fits vanish and Z_T is a translation
  kInconsistent,      ///< energies vanish but the rigid/translation checks fail
};

std::string to_string(EnergyConclusion conclusion);

struct EnergyTriple {
  double outer_viscous = 0.0;  ///< nu+ ||eps(phi+)||^2
  double inner_viscous = 0.0;  ///< nu- ||eps(phi-)||^2
  double interface = 0.0;      ///< mu ||grad_G Z_T||^2
  double interface_trace = 0.0;  ///< max |phi| over samples at r = r_s
  RigidMotionFit inner_fit;
  RigidMotionFit outer_fit;
  double translation_spread = 0.0;  ///< max deviation of Z_T from its mean
  EnergyConclusion conclusion = EnergyConclusion::kNonzeroEnergy;
};

/// Evaluates the three energy terms. When all are <= tol, fits rigid motions
/// to phi+- and requires them to vanish (they are zero on the interface) and
/// requires Z_T to be constant on the grid.
EnergyTriple steady_adjoint_energy_check(const PolarSamples& phi_minus,
                                         const PolarSamples& phi_plus,
                                         const SurfaceField<double>& z_terminal,
                                         const FluidParams& params, double tol);

}  // namespace bubble
