#pragma once

// Per-angular-mode radial discretization of the two-phase Stokes problem on
// the concentric configuration (disk of radius r_s inside a wall of radius R).
//
// Modal convention for angular wavenumber m >= 0 (complex amplitudes, real
// profiles):
//   u_r = a(r) e^{i m theta},  u_theta = i b(r) e^{i m theta},
//   p   = q(r) e^{i m theta},
// and the interface displacement Z = (F n + i G e_theta) e^{i m theta}, with
// e_theta the counter-clockwise unit vector. Every inner product carries the
// angular factor int |e^{i m theta}|^2 d theta = 2 pi.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bubble/fluid_params.hpp"

namespace bubble {

/// Uniform radial grid.
///
/// Disk grids are offset by half a cell from the axis: r_j = (j + 1/2) h for
/// j = 0..n with h = r_s / (n + 1/2), so that r_n = r_s is the interface.
/// Annulus grids are r_j = r_in + j h, j = 0..n.
struct RadialGrid {
  Eigen::VectorXd nodes;
  double spacing = 0.0;
  bool axis_offset = false;

  static RadialGrid disk(double radius, int intervals);
  static RadialGrid annulus(double inner, double outer, int intervals);

  /// Number of cells between consecutive nodes (the axis half-cell of a
  /// disk grid is not counted).
  int intervals() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Parity of the velocity profiles a, b under r -> -r for wavenumber m:
/// +1 (even) for odd m, -1 (odd) for even m. The pressure profile has
/// parity (-1)^m.
inline int velocity_axis_parity(int mode) { return mode % 2 == 0 ? -1 : 1; }
inline int pressure_axis_parity(int mode) { return mode % 2 == 0 ? 1 : -1; }

/// Strong-form residuals of the polar Stokes operator at every grid node.
struct PolarResidual {
  Eigen::VectorXd radial;      ///< r-component of -div sigma(v, q)
  Eigen::VectorXd azimuthal;   ///< theta-component of -div sigma(v, q), divided by i
  Eigen::VectorXd divergence;  ///< div v
};

/// Applies -div sigma(v, q) = -nu (Laplacian with the 1/r^2 couplings
/// between v_r and v_theta) + grad q, and div v, to modal profiles sampled on
/// `grid`, using second-order centred differences in the interior and
/// second-order one-sided stencils at the ends. On disk grids the ghost value
/// at r = -h/2 follows the axis parity of the mode.
PolarResidual polar_stokes_apply(int mode, const RadialGrid& grid, double nu,
                                 const Eigen::Ref<const Eigen::VectorXd>& v_r,
                                 const Eigen::Ref<const Eigen::VectorXd>& v_theta,
                                 const Eigen::Ref<const Eigen::VectorXd>& q);

enum class Domain {
  kInnerDisk,     ///< Dirichlet at r = r_s
  kOuterAnnulus,  ///< Dirichlet at r = r_s and r = R
  kTwoPhase,      ///< both fluids, shared interface velocity, Dirichlet at R
};

/// Discretized mode-m operators.
///
/// Velocity unknowns are the profile values (a, b) at grid nodes that do not
/// carry a Dirichlet condition; on a two-phase system the interface node is
/// shared by both fluids, so u+ = u- holds by construction. The viscous
/// stiffness is the quadratic form 2 nu int |eps(u)|^2 (midpoint rule per
/// cell), the mass is lumped, and the divergence has one row per cell
/// (midpoint of (r a)' - m b, scaled by 2 pi h).
///
/// Semi-discrete dynamics of a two-phase system:
///   M dU/dt = -K U + D^T p + T^T W (mu L Z + g) + M f,   D U = 0,
///   dZ/dt   = T U,
/// where T reads the interface velocity (a, b), W = 2 pi r_s and L is the
/// modal surface Laplacian.
struct ModeSystem {
  int mode = 0;
  Domain domain = Domain::kTwoPhase;
  FluidParams params;
  AnnularGeometry geom;
  bool density_weighted = true;
  RadialGrid inner;  ///< empty for kOuterAnnulus
  RadialGrid outer;  ///< empty for kInnerDisk

  /// Node -> velocity unknown, or -1 where a Dirichlet condition holds.
  std::vector<int> inner_a, inner_b, outer_a, outer_b;

  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;
  Eigen::SparseMatrix<double> divergence;
  Eigen::SparseMatrix<double> trace;  ///< 2 x nv, zero rows unless kTwoPhase
  Eigen::Matrix2d surface_laplacian = Eigen::Matrix2d::Zero();
  double interface_weight = 0.0;

  int num_velocity() const { return static_cast<int>(mass.size()); }
  int num_constraints() const { return static_cast<int>(divergence.rows()); }
  bool has_interface() const { return domain == Domain::kTwoPhase; }

  /// Radial and azimuthal profiles of a velocity vector on the inner/outer
  /// grid, with zeros at Dirichlet nodes.
  Eigen::VectorXd inner_profile_a(const Eigen::VectorXd& u) const;
  Eigen::VectorXd inner_profile_b(const Eigen::VectorXd& u) const;
  Eigen::VectorXd outer_profile_a(const Eigen::VectorXd& u) const;
  Eigen::VectorXd outer_profile_b(const Eigen::VectorXd& u) const;

  /// Differential-algebraic form E x' = A x + B g on x = [U; p; Z]. E is
  /// singular on the pressure rows.
  Eigen::SparseMatrix<double> dae_mass() const;
  Eigen::SparseMatrix<double> dae_dynamics() const;
  Eigen::SparseMatrix<double> dae_control() const;
};

/// (1/r_s^2) [[-(1+m^2), 2m], [2m, -(1+m^2)]]: the Laplace-Beltrami operator
/// restricted to mode m in the (normal, azimuthal) frame. Its eigenvalues are
/// -(m-1)^2/r_s^2 and -(m+1)^2/r_s^2, the Cartesian wavenumbers m -+ 1.
Eigen::Matrix2d modal_surface_laplacian(int mode, double radius);

/// Assembles the mode-m operators. `n_inner` and `n_outer` are the interval
/// counts of the inner and outer grids (ignored when the domain lacks that
/// side). With `density_weighted` false the mass carries no density, which
/// gives the Stokes operator eigenproblem -div sigma = lambda v.
ModeSystem assemble_mode_system(int mode, const FluidParams& params, const AnnularGeometry& geom,
                                Domain domain, int n_inner, int n_outer,
                                bool density_weighted = true);

/// The mode operators restricted to the discretely divergence-free subspace.
struct ReducedModeSystem {
  Eigen::MatrixXd basis;      ///< nv x nc, orthonormal columns spanning ker D
  Eigen::MatrixXd mass;       ///< P^T M P
  Eigen::MatrixXd stiffness;  ///< P^T K P
  Eigen::MatrixXd trace;      ///< T P (2 x nc)

  int size() const { return static_cast<int>(basis.cols()); }
};

ReducedModeSystem reduce(const ModeSystem& system);

enum class SpectrumBranch { kSwirl, kAnalytic, kNumeric };
enum class StokesSide { kInner, kOuter, kCoupled };

std::string to_string(SpectrumBranch branch);
std::string to_string(StokesSide side);
StokesSide parse_stokes_side(const std::string& text);

struct SpectrumEntry {
  double lambda = 0.0;
  int mode = 0;
  SpectrumBranch branch = SpectrumBranch::kNumeric;
  int eigenvector = -1;   ///< column of SpectrumResult::eigenvectors, -1 if none
  double residual = 0.0;  ///< relative residual of the eigen-equation
};

struct SpectrumResult {
  std::vector<SpectrumEntry> entries;  ///< ascending lambda
  Eigen::MatrixXd eigenvectors;        ///< full velocity vectors, one per column
  std::string provenance;              ///< "analytic" or e.g. "numeric:inner:N=128"
  int grid = 0;
};

/// lambda_k = nu- (z_k / r_s)^2 with z_k the k-th positive zero of J_1: the
/// mode-0 swirl eigenvalues of the inner Dirichlet Stokes operator.
SpectrumResult swirl_spectrum_analytic(const FluidParams& params, const AnnularGeometry& geom,
                                       int count);

/// `count` smallest eigenvalues of the discretized mode-m Stokes operator
/// -div sigma = lambda v on the requested side:
///   inner   - disk, Dirichlet at r_s (viscosity nu-);
///   outer   - annulus, Dirichlet at r_s and R (viscosity nu+);
///   coupled - both fluids with continuous velocity, zero stress jump at the
///             interface and Dirichlet at R.
/// Requires grid >= 32. Mode-0 inner entries are tagged kSwirl.
SpectrumResult stokes_spectrum_numeric(int mode, const FluidParams& params,
                                       const AnnularGeometry& geom, int grid, int count,
                                       StokesSide side);

/// Largest |Im lambda| / |lambda| over the eigenvalues of M_r^{-1} K_r
/// computed with a general (non-symmetric) eigensolver.
double spectral_symmetry_defect(const ReducedModeSystem& reduced);

/// |J_1(sqrt(lambda / nu-) r_s)|. Vanishes exactly when a mode-0 swirl
/// eigenfunction of the inner disk satisfies the interface no-slip condition.
double continuation_residual(double lambda, const FluidParams& params,
                             const AnnularGeometry& geom);

/// Rigid motion y -> h + omega y_perp, y_perp = (-y_2, y_1).
template <typename Scalar = double>
struct RigidMotionFitT {
  Eigen::Matrix<Scalar, 2, 1> h = Eigen::Matrix<Scalar, 2, 1>::Zero();
  Scalar omega = Scalar(0);
  Scalar residual = Scalar(0);  ///< max node misfit (Euclidean)
};
using RigidMotionFit = RigidMotionFitT<double>;

/// Least-squares rigid motion through `values` sampled at `nodes` (both
/// n x 2). Throws std::invalid_argument for fewer than three nodes or
/// collinear node sets.
template <typename DerivedNodes, typename DerivedValues>
RigidMotionFitT<typename DerivedNodes::Scalar> rigid_motion_fit(
    const Eigen::MatrixBase<DerivedNodes>& nodes, const Eigen::MatrixBase<DerivedValues>& values) {
  using Scalar = typename DerivedNodes::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = nodes.rows();
  if (nodes.cols() != 2 || values.cols() != 2 || values.rows() != n) {
    throw std::invalid_argument("rigid_motion_fit: nodes and values must be n x 2");
  }
  if (n < 3) throw std::invalid_argument("rigid_motion_fit: need at least three nodes");

  const Eigen::Matrix<Scalar, 1, 2> centroid = nodes.colwise().mean();
  const Matrix centred = nodes.rowwise() - centroid;
  const Eigen::Matrix<Scalar, 2, 2> scatter = centred.transpose() * centred;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 2, 2>> eig(scatter);
  using std::sqrt;
  const Scalar spread = eig.eigenvalues()(1);
  if (!(eig.eigenvalues()(0) > Scalar(1e-12) * spread)) {
    throw std::invalid_argument("rigid_motion_fit: node set is collinear");
  }

  Matrix design = Matrix::Zero(2 * n, 3);
  Vector rhs(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(2 * i, 0) = Scalar(1);
    design(2 * i, 2) = -nodes(i, 1);
    design(2 * i + 1, 1) = Scalar(1);
    design(2 * i + 1, 2) = nodes(i, 0);
    rhs(2 * i) = values(i, 0);
    rhs(2 * i + 1) = values(i, 1);
  }
  const Vector coef = design.colPivHouseholderQr().solve(rhs);
  RigidMotionFitT<Scalar> fit;
  fit.h = coef.template head<2>();
  fit.omega = coef(2);
  const Vector misfit = design * coef - rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, misfit.template segment<2>(2 * i).norm());
  }
  return fit;
}

}  // namespace bubble
