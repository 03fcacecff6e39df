#include "bubble/radial_stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bubble/specfun.hpp"

namespace bubble {
namespace {

// Max-norm error of polar_stokes_apply against the exact operator applied to
// the Stokes-like polynomial field a = m r^{m+1}, b = (m+2) r^{m+1},
// q = r^m, for m >= 1 (a = m s / r, b = s' for the stream function s = r^{m+2}).
double polynomial_field_error(int m, const RadialGrid& grid, double nu) {
  const Eigen::ArrayXd r = grid.nodes.array();
  const Eigen::VectorXd a = m * r.pow(m + 1);
  const Eigen::VectorXd b = (m + 2) * r.pow(m + 1);
  const Eigen::VectorXd q = r.pow(m);
  const PolarResidual res = polar_stokes_apply(m, grid, nu, a, b, q);
  const Eigen::ArrayXd exact = (m - nu * 4.0 * m * (m + 1)) * r.pow(m - 1);
  // The 1/r terms turn the O(h^2) stencil error into O(h) on the first few
  // nodes next to the axis, so measure away from it.
  const Eigen::ArrayXd away = (r >= 0.2).cast<double>();
  return std::max({((res.radial.array() - exact) * away).abs().maxCoeff(),
                   ((res.azimuthal.array() - exact) * away).abs().maxCoeff(),
                   (res.divergence.array() * away).abs().maxCoeff()});
}

GTEST_TEST(RadialGrid, DiskEndsOnInterface) {
  const RadialGrid g = RadialGrid::disk(1.5, 10);
  EXPECT_EQ(g.intervals(), 10);
  EXPECT_DOUBLE_EQ(g.nodes[10], 1.5);
  EXPECT_NEAR(g.nodes[0], 0.5 * g.spacing, 1e-15);
  const RadialGrid a = RadialGrid::annulus(1.0, 2.0, 4);
  EXPECT_DOUBLE_EQ(a.nodes[0], 1.0);
  EXPECT_DOUBLE_EQ(a.nodes[4], 2.0);
  EXPECT_THROW(RadialGrid::disk(1.0, 2), std::invalid_argument);
  EXPECT_THROW(RadialGrid::annulus(2.0, 1.0, 8), std::invalid_argument);
}

GTEST_TEST(RadialStokes, AxisParity) {
  EXPECT_EQ(velocity_axis_parity(0), -1);
  EXPECT_EQ(velocity_axis_parity(1), 1);
  EXPECT_EQ(velocity_axis_parity(2), -1);
  EXPECT_EQ(velocity_axis_parity(3), 1);
  EXPECT_EQ(pressure_axis_parity(0), 1);
  EXPECT_EQ(pressure_axis_parity(3), -1);
}

GTEST_TEST(PolarApply, RigidRotationIsStressFree) {
  const RadialGrid g = RadialGrid::disk(1.0, 32);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.nodes.size());
  const PolarResidual res = polar_stokes_apply(0, g, 1.3, zero, g.nodes, zero);
  EXPECT_LE(res.radial.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(res.azimuthal.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(res.divergence.cwiseAbs().maxCoeff(), 1e-12);
}

GTEST_TEST(PolarApply, SecondOrderOnPolynomialFields) {
  for (int m : {1, 2, 3}) {
    const double e1 = polynomial_field_error(m, RadialGrid::disk(1.0, 32), 0.7);
    const double e2 = polynomial_field_error(m, RadialGrid::disk(1.0, 64), 0.7);
    if (m == 1) {
      // Quadratic profiles are differentiated exactly.
      EXPECT_LE(e2, 1e-9);
      continue;
    }
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.25) << "m=" << m;
    const double a1 = polynomial_field_error(m, RadialGrid::annulus(1.0, 2.0, 32), 0.7);
    const double a2 = polynomial_field_error(m, RadialGrid::annulus(1.0, 2.0, 64), 0.7);
    EXPECT_NEAR(std::log2(a1 / a2), 2.0, 0.25) << "annulus m=" << m;
  }
}

GTEST_TEST(PolarApply, SwirlEigenfunction) {
  // v_theta = J_1(z r) solves -nu (b'' + b'/r - b/r^2) = nu z^2 b.
  const double z = bessel_zeros(1, 1).zeros[0];
  double previous = 0.0;
  for (int n : {64, 128, 256}) {
    const RadialGrid g = RadialGrid::disk(1.0, n);
    Eigen::VectorXd b(g.nodes.size());
    for (int j = 0; j < b.size(); ++j) b[j] = bessel_j(1, z * g.nodes[j]);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(b.size());
    const PolarResidual res = polar_stokes_apply(0, g, 1.0, zero, b, zero);
    const Eigen::ArrayXd away = (g.nodes.array() >= 0.2).cast<double>();
    const double err = ((res.azimuthal - z * z * b).array() * away).abs().maxCoeff();
    if (previous > 0) EXPECT_NEAR(std::log2(previous / err), 2.0, 0.3);
    previous = err;
  }
}

GTEST_TEST(ModalSurfaceLaplacian, EigenvaluesAreShiftedWavenumbers) {
  for (int m = 0; m < 6; ++m) {
    const double r = 1.3;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(modal_surface_laplacian(m, r));
    const double lo = -std::pow(m + 1, 2) / (r * r);
    const double hi = -std::pow(m - 1, 2) / (r * r);
    EXPECT_NEAR(eig.eigenvalues()[0], lo, 1e-12);
    EXPECT_NEAR(eig.eigenvalues()[1], hi, 1e-12);
  }
  // Mode 1 has the rigid translation direction (1, 1) in its kernel.
  EXPECT_LE((modal_surface_laplacian(1, 2.0) * Eigen::Vector2d(1, 1)).norm(), 1e-15);
}

GTEST_TEST(ModeSystem, StructuralProperties) {
  FluidParams params{2.0, 0.5, 1.5, 0.8, 1.0};
  for (int m : {0, 1, 2, 5}) {
    const ModeSystem sys = assemble_mode_system(m, params, {0.8, 2.0}, Domain::kTwoPhase, 16, 12);
    const Eigen::MatrixXd k(sys.stiffness);
    EXPECT_LE((k - k.transpose()).cwiseAbs().maxCoeff(), 1e-12 * k.cwiseAbs().maxCoeff());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues().minCoeff(),
              -1e-10 * k.norm());
    EXPECT_GT(sys.mass.minCoeff(), 0.0);
    EXPECT_EQ(sys.trace.rows(), 2);
    EXPECT_DOUBLE_EQ(sys.interface_weight, 2 * std::numbers::pi * 0.8);
    const int n = sys.num_velocity() + sys.num_constraints() + 2;
    EXPECT_EQ(sys.dae_mass().rows(), n);
    EXPECT_EQ(sys.dae_dynamics().cols(), n);
    EXPECT_EQ(sys.dae_control().rows(), n);
    EXPECT_EQ(sys.dae_control().cols(), 2);

    const ReducedModeSystem red = reduce(sys);
    EXPECT_LE((sys.divergence * red.basis).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd gram = red.basis.transpose() * red.basis;
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(red.size(), red.size())).cwiseAbs().maxCoeff(),
              1e-12);
  }
  EXPECT_THROW(assemble_mode_system(-1, params, {1, 2}, Domain::kTwoPhase, 8, 8),
               std::invalid_argument);
}

GTEST_TEST(ModeSystem, SpectralSymmetry) {
  FluidParams params{1.0, 0.5, 1.0, 2.0, 1.0};
  for (int m = 0; m <= 3; ++m) {
    const ModeSystem sys = assemble_mode_system(m, params, {1.0, 2.0}, Domain::kTwoPhase, 24, 24);
    EXPECT_LE(spectral_symmetry_defect(reduce(sys)), 1e-8) << "m=" << m;
  }
}

GTEST_TEST(Spectrum, SwirlBranchMatchesAnalytic) {
  for (double nu : {0.5, 2.0}) {
    for (double r_s : {0.5, 1.0}) {
      FluidParams params;
      params.nu_minus = nu;
      const AnnularGeometry geom{r_s, 2.0};
      const double exact = swirl_spectrum_analytic(params, geom, 1).entries[0].lambda;
      const SpectrumResult num =
          stokes_spectrum_numeric(0, params, geom, 128, 3, StokesSide::kInner);
      EXPECT_EQ(num.entries[0].branch, SpectrumBranch::kSwirl);
      EXPECT_NEAR(num.entries[0].lambda / exact, 1.0, 1e-3);
    }
  }
}

GTEST_TEST(Spectrum, SwirlConvergesAtSecondOrder) {
  const FluidParams params;
  const AnnularGeometry geom;
  const double exact = swirl_spectrum_analytic(params, geom, 1).entries[0].lambda;
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    err.push_back(std::abs(
        stokes_spectrum_numeric(0, params, geom, n, 1, StokesSide::kInner).entries[0].lambda -
        exact));
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.2);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 2.0, 0.2);
}

GTEST_TEST(Spectrum, FirstSwirlEigenvalueBracket) {
  FluidParams params;
  const auto s = swirl_spectrum_analytic(params, {1.0, 2.0}, 3);
  EXPECT_GT(s.entries[0].lambda, 14.4);
  EXPECT_LT(s.entries[0].lambda, 15.3);
  EXPECT_EQ(s.provenance, "analytic");
  EXPECT_LT(s.entries[0].lambda, s.entries[1].lambda);
}

GTEST_TEST(Spectrum, HigherModesMatchBesselZeros) {
  // Nonradial disk eigenvalues are nu (j_{m+1,k} / r_s)^2.
  FluidParams params;
  params.nu_minus = 1.5;
  const AnnularGeometry geom{0.9, 2.0};
  for (int m = 1; m <= 3; ++m) {
    const auto zeros = bessel_zeros(m + 1, 3).zeros;
    const SpectrumResult num = stokes_spectrum_numeric(m, params, geom, 128, 3, StokesSide::kInner);
    for (int k = 0; k < 3; ++k) {
      const double exact = params.nu_minus * std::pow(zeros[k] / geom.r_s, 2);
      EXPECT_NEAR(num.entries[k].lambda / exact, 1.0, 5e-3) << "m=" << m << " k=" << k;
      EXPECT_LE(num.entries[k].residual, 1e-8);
    }
  }
}

GTEST_TEST(Spectrum, AllSidesPositiveAndSorted) {
  FluidParams params{1.2, 0.7, 1.0, 1.0, 1.0};
  for (StokesSide side : {StokesSide::kInner, StokesSide::kOuter, StokesSide::kCoupled}) {
    for (int m : {0, 1, 2}) {
      const SpectrumResult s = stokes_spectrum_numeric(m, params, {1.0, 2.0}, 32, 5, side);
      ASSERT_EQ(s.entries.size(), 5u);
      for (std::size_t k = 0; k < s.entries.size(); ++k) {
        EXPECT_GT(s.entries[k].lambda, 0.0);
        if (k > 0) EXPECT_LE(s.entries[k - 1].lambda, s.entries[k].lambda);
      }
    }
  }
  EXPECT_THROW(stokes_spectrum_numeric(0, params, {1, 2}, 16, 3, StokesSide::kInner),
               std::invalid_argument);
  EXPECT_EQ(parse_stokes_side("coupled"), StokesSide::kCoupled);
  EXPECT_THROW(parse_stokes_side("both"), std::invalid_argument);
}

GTEST_TEST(Spectrum, ModeZeroHasNoRadialVelocity) {
  const FluidParams params;
  const ModeSystem sys = assemble_mode_system(0, params, {1.0, 2.0}, Domain::kInnerDisk, 64, 64,
                                              false);
  const SpectrumResult s = stokes_spectrum_numeric(0, params, {1.0, 2.0}, 64, 4, StokesSide::kInner);
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXd v = s.eigenvectors.col(k);
    EXPECT_LE(sys.inner_profile_a(v).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(sys.inner_profile_b(v).cwiseAbs().maxCoeff(), 1e-3);
  }
}

GTEST_TEST(Spectrum, ContinuationResidual) {
  FluidParams params;
  params.nu_minus = 0.5;
  const AnnularGeometry geom{1.7, 3.0};
  for (const auto& e : swirl_spectrum_analytic(params, geom, 5).entries) {
    EXPECT_LE(continuation_residual(e.lambda, params, geom), 1e-12);
  }
  EXPECT_GT(continuation_residual(10.0, params, geom), 1e-3);
  EXPECT_THROW(continuation_residual(-1.0, params, geom), std::invalid_argument);
}

GTEST_TEST(RigidMotionFit, RecoversExactMotion) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixX2d nodes(40, 2), values(40, 2);
  const Eigen::Vector2d h(0.3, -1.1);
  const double omega = 0.7;
  for (int i = 0; i < 40; ++i) {
    nodes.row(i) << u(rng), u(rng);
    values.row(i) << h.x() - omega * nodes(i, 1), h.y() + omega * nodes(i, 0);
  }
  const RigidMotionFit fit = rigid_motion_fit(nodes, values);
  EXPECT_LE((fit.h - h).norm(), 1e-13);
  EXPECT_NEAR(fit.omega, omega, 1e-13);
  EXPECT_LE(fit.residual, 1e-13);
}

GTEST_TEST(RigidMotionFit, ResidualScalesWithPerturbation) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixX2d nodes(30, 2), rigid(30, 2), noise(30, 2);
  for (int i = 0; i < 30; ++i) {
    nodes.row(i) << u(rng), u(rng);
    rigid.row(i) << 1.0 + 2.0 * nodes(i, 1), -0.5 - 2.0 * nodes(i, 0);
    noise.row(i) << nodes(i, 0) * nodes(i, 0), nodes(i, 0) * nodes(i, 1);  // not rigid
  }
  std::vector<double> residuals;
  for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
    residuals.push_back(rigid_motion_fit(nodes, rigid + delta * noise).residual / delta);
  }
  for (double r : residuals) EXPECT_NEAR(r / residuals[0], 1.0, 1e-6);
  EXPECT_GT(residuals[0], 0.0);
}

GTEST_TEST(RigidMotionFit, RejectsDegenerateNodeSets) {
  Eigen::MatrixX2d two(2, 2);
  two << 0, 0, 1, 1;
  EXPECT_THROW(rigid_motion_fit(two, two), std::invalid_argument);
  Eigen::MatrixX2d line(5, 2);
  for (int i = 0; i < 5; ++i) line.row(i) << i, 2.0 * i;
  EXPECT_THROW(rigid_motion_fit(line, line), std::invalid_argument);
}

GTEST_TEST(RigidMotionFit, WorksInLongDouble) {
  Eigen::Matrix<long double, Eigen::Dynamic, 2> nodes(3, 2), values(3, 2);
  nodes << 0, 0, 1, 0, 0, 1;
  values << 1, 2, 1, 2.5L, 0.5L, 2;
  const auto fit = rigid_motion_fit(nodes, values);
  EXPECT_NEAR(static_cast<double>(fit.omega), 0.5, 1e-15);
  EXPECT_NEAR(static_cast<double>(fit.h.x()), 1.0, 1e-15);
}

}  // namespace
}  // namespace bubble
