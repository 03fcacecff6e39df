#include "bubble/control_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bubble/specfun.hpp"

namespace bubble {
namespace {

constexpr double kPi = std::numbers::pi;

GTEST_TEST(ExcludedRadii, SwirlSelfMatchesAndCrossPairs) {
  const auto z = bessel_zeros(1, 5).zeros;
  for (double nu : {0.5, 1.0, 2.0}) {
    for (double r_s : {0.5, 1.0, 2.0}) {
      FluidParams params;
      params.nu_minus = nu;
      ExcludedRadiusOptions opt;
      opt.max_mode = 0;
      opt.tol = 1e6;  // keep every pair
      const ExcludedRadiusReport rep = excluded_radii(params, {r_s, 3.0}, opt);
      ASSERT_EQ(rep.matches.size(), 25u);
      for (const auto& m : rep.matches) {
        EXPECT_GE(m.gap, 0.0);
        const int k = m.lambda_index - 1, l = m.zero_index - 1;
        EXPECT_EQ(m.self_match, k == l);
        if (k == l) {
          EXPECT_LE(m.gap, 1e-12);
        } else {
          EXPECT_NEAR(m.gap, r_s * std::abs(z[l] / z[k] - 1.0), 1e-12);
        }
      }
      for (std::size_t i = 1; i < rep.matches.size(); ++i) {
        EXPECT_LE(rep.matches[i - 1].gap, rep.matches[i].gap);
      }
    }
  }
}

GTEST_TEST(ExcludedRadii, ToleranceFiltersToSelfMatches) {
  FluidParams params;
  ExcludedRadiusOptions opt;
  opt.max_mode = 0;
  const auto rep = excluded_radii(params, {1.0, 2.0}, opt);
  ASSERT_EQ(rep.matches.size(), 5u);
  for (const auto& m : rep.matches) EXPECT_TRUE(m.self_match);
  opt.tol = 0.0;
  EXPECT_THROW(excluded_radii(params, {1.0, 2.0}, opt), std::invalid_argument);
}

GTEST_TEST(ExcludedRadii, NumericBranchesAreReported) {
  FluidParams params;
  ExcludedRadiusOptions opt;
  opt.tol = 1e6;
  opt.max_mode = 2;
  opt.grid = 32;
  opt.num_eigs = 3;
  opt.num_zeros = 2;
  const auto rep = excluded_radii(params, {1.0, 2.0}, opt);
  EXPECT_EQ(rep.matches.size(), 3u * 2u * 3u);
  int numeric = 0;
  for (const auto& m : rep.matches) {
    if (m.branch == SpectrumBranch::kNumeric) {
      ++numeric;
      EXPECT_FALSE(m.self_match);
      EXPECT_GE(m.lambda_mode, 1);
      EXPECT_NEAR(m.predicted_radius, std::sqrt(params.nu_minus / m.lambda) * m.zero, 1e-15);
    }
  }
  EXPECT_EQ(numeric, 12);
  EXPECT_NE(rep.provenance.find("N=32"), std::string::npos);
}

GTEST_TEST(Duality, HoldsForAllModes) {
  const FluidParams params{1.4, 0.6, 0.9, 1.2, 0.7};
  for (int m = 0; m <= 8; ++m) {
    DualityOptions opt;
    opt.mode = m;
    opt.steps = 40;
    opt.n_inner = opt.n_outer = 24;
    opt.seed = 100 + m;
    const DualityReport rep = duality_check(params, {0.9, 2.0}, opt);
    EXPECT_LE(rep.residual, 1e-10) << "m=" << m;
    EXPECT_NEAR(rep.rhs_transpose, rep.lhs, 1e-10 * std::abs(rep.lhs));
    EXPECT_EQ(rep.seed, 100u + m);
    EXPECT_DOUBLE_EQ(rep.horizon, 0.5);
  }
}

GTEST_TEST(Duality, ZeroControlAndLinearity) {
  ModeStepper s(assemble_mode_system(2, FluidParams{}, {1.0, 2.0}, Domain::kTwoPhase, 16, 16),
                0.01);
  const Eigen::VectorXd terminal = seeded_normal(s.state_size(), 3);
  const DualityReport zero = duality_check(s, Eigen::Matrix2Xd::Zero(2, 20), terminal);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  EXPECT_EQ(zero.residual, 0.0);

  const Eigen::Matrix2Xd g = seeded_normal(40, 4).reshaped(2, 20);
  const DualityReport one = duality_check(s, g, terminal);
  const DualityReport two = duality_check(s, 2.0 * g, terminal);
  EXPECT_NEAR(two.lhs, 2.0 * one.lhs, 1e-12 * std::abs(one.lhs));
  EXPECT_NEAR(two.rhs, 2.0 * one.rhs, 1e-12 * std::abs(one.rhs));
}

GTEST_TEST(Duality, SeededRunsAreReproducible) {
  DualityOptions opt;
  opt.steps = 20;
  opt.n_inner = opt.n_outer = 16;
  const auto a = duality_check(FluidParams{}, {1.0, 2.0}, opt);
  const auto b = duality_check(FluidParams{}, {1.0, 2.0}, opt);
  EXPECT_EQ(a.lhs, b.lhs);
  EXPECT_EQ(a.rhs, b.rhs);
  opt.seed = 2;
  EXPECT_NE(duality_check(FluidParams{}, {1.0, 2.0}, opt).lhs, a.lhs);
}

GTEST_TEST(Gramian, ImpulseColumnMatchesSimulation) {
  ModeStepper s(assemble_mode_system(2, FluidParams{}, {1.0, 2.0}, Domain::kTwoPhase, 16, 16),
                0.02);
  const Eigen::MatrixXd map = reachable_map(s, 20, 4);
  SimulationInput input;
  input.steps = 20;
  input.controls = Eigen::Matrix2Xd::Zero(2, 20);
  input.controls.block(0, 0, 1, 5).setOnes();  // first slab, normal direction
  const Eigen::VectorXd x = simulate(s, input).back().velocity;
  const Eigen::VectorXd c = s.reduce_velocity(x);
  const Eigen::MatrixXd upper = Eigen::LLT<Eigen::MatrixXd>(s.reduced().mass).matrixU();
  EXPECT_LE((map.col(0).head(c.size()) - upper * c).norm(), 1e-12 * map.col(0).norm());
}

GTEST_TEST(Gramian, PositiveAndReorderInvariant) {
  GramianOptions opt;
  opt.steps = 20;
  opt.n_inner = opt.n_outer = 24;
  const GramianReport rep = gramian_report(opt, 1.0);
  EXPECT_GT(rep.sigma_min, 0.0);
  EXPECT_LE(rep.sigma_min, rep.sigma_max);
  EXPECT_EQ(rep.singular_values.size(), 2 * opt.slabs);

  ModeStepper s(assemble_mode_system(2, opt.params, {1.0, 2.0}, Domain::kTwoPhase, 24, 24),
                opt.horizon / opt.steps);
  Eigen::MatrixXd map = reachable_map(s, opt.steps, opt.slabs);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(map.cols());
  perm.setIdentity();
  std::reverse(perm.indices().data(), perm.indices().data() + perm.size());
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(map * perm).singularValues();
  EXPECT_LE((sv - rep.singular_values).norm(), 1e-12 * rep.sigma_max);
}

GTEST_TEST(Gramian, EmptyBasisAndValidation) {
  GramianOptions opt;
  opt.slabs = 0;
  opt.steps = 4;
  opt.n_inner = opt.n_outer = 8;
  const GramianReport rep = gramian_report(opt, 1.0);
  EXPECT_EQ(rep.sigma_max, 0.0);
  EXPECT_EQ(rep.singular_values.size(), 0);
  EXPECT_THROW(gramian_scan(opt, {0.5, 2.5}), std::invalid_argument);
}

GTEST_TEST(Gramian, ScanIsDeterministicAcrossWorkers) {
  GramianOptions opt;
  opt.steps = 10;
  opt.n_inner = opt.n_outer = 16;
  const std::vector<double> radii{0.6, 0.9, 1.2, 1.5};
  const auto serial = gramian_scan(opt, radii);
  opt.workers = 3;
  const auto parallel = gramian_scan(opt, radii);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].radius, radii[i]);
    EXPECT_EQ(parallel[i].radius, radii[i]);
    EXPECT_TRUE(serial[i].singular_values == parallel[i].singular_values);
  }
}

GTEST_TEST(Gramian, TranslationQuotient) {
  const Eigen::Matrix2d q = translation_quotient(1);
  EXPECT_LE((q * Eigen::Vector2d(1, 1)).norm(), 1e-15);
  EXPECT_LE((q * q - q).norm(), 1e-15);
  EXPECT_EQ(translation_quotient(2), Eigen::Matrix2d::Identity());
}

PolarSamples zero_field(const Eigen::VectorXd& radii) {
  return PolarSamples::Sample(radii, 32, [](const Eigen::Vector2d&) {
    return Eigen::Vector2d::Zero().eval();
  });
}

GTEST_TEST(StrainEnergy, RigidMotionHasNone) {
  const Eigen::VectorXd radii = Eigen::VectorXd::LinSpaced(9, 0.1, 1.0);
  const auto field = PolarSamples::Sample(radii, 32, [](const Eigen::Vector2d& y) {
    return Eigen::Vector2d(0.4 - 1.3 * y.y(), -0.2 + 1.3 * y.x());
  });
  EXPECT_LE(strain_energy(field), 1e-20);
}

GTEST_TEST(StrainEnergy, PureShear) {
  // v = (y2, y1): eps_xy = 1, |eps|^2 = 2, area pi (1 - 0.25).
  const Eigen::VectorXd radii = Eigen::VectorXd::LinSpaced(41, 0.5, 1.0);
  const auto field = PolarSamples::Sample(radii, 32, [](const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y.y(), y.x());
  });
  EXPECT_NEAR(strain_energy(field), 2.0 * kPi * 0.75, 1e-3);
}

GTEST_TEST(EnergyCheck, TranslationConclusion) {
  const Eigen::VectorXd inner = Eigen::VectorXd::LinSpaced(6, 0.2, 1.0);
  const Eigen::VectorXd outer = Eigen::VectorXd::LinSpaced(6, 1.0, 2.0);
  const auto z = SurfaceField<double>::Sample(32, 1.0, [](double) {
    return Eigen::Vector2d(0.5, -2.0);
  });
  const EnergyTriple e =
      steady_adjoint_energy_check(zero_field(inner), zero_field(outer), z, FluidParams{}, 1e-10);
  EXPECT_EQ(e.outer_viscous, 0.0);
  EXPECT_EQ(e.inner_viscous, 0.0);
  EXPECT_LE(e.interface, 1e-25);
  EXPECT_EQ(e.conclusion, EnergyConclusion::kTranslation);
  EXPECT_EQ(to_string(e.conclusion), "translation");
}

GTEST_TEST(EnergyCheck, CosineDisplacementEnergy) {
  const Eigen::VectorXd inner = Eigen::VectorXd::LinSpaced(6, 0.2, 1.5);
  const Eigen::VectorXd outer = Eigen::VectorXd::LinSpaced(6, 1.5, 2.0);
  FluidParams params;
  params.mu = 0.6;
  const double r_s = 1.5;
  const auto z = SurfaceField<double>::Sample(64, r_s, [](double t) {
    return Eigen::Vector2d(std::cos(3 * t), 0.0);
  });
  const EnergyTriple e =
      steady_adjoint_energy_check(zero_field(inner), zero_field(outer), z, params, 1e-10);
  EXPECT_NEAR(e.interface, params.mu * 9.0 / (r_s * r_s) * kPi * r_s, 1e-12);
  EXPECT_EQ(e.conclusion, EnergyConclusion::kNonzeroEnergy);
}

GTEST_TEST(EnergyCheck, RotationVanishingOnTheInterfaceIsZero) {
  // A pure rotation has no strain; with omega = 0 the fit must vanish, and a
  // nonzero rotation is flagged because it does not vanish on the interface.
  const Eigen::VectorXd inner = Eigen::VectorXd::LinSpaced(6, 0.2, 1.0);
  const Eigen::VectorXd outer = Eigen::VectorXd::LinSpaced(6, 1.0, 2.0);
  const auto z = SurfaceField<double>::Zero(32, 1.0);
  const auto rotation = PolarSamples::Sample(inner, 32, [](const Eigen::Vector2d& y) {
    return Eigen::Vector2d(-0.3 * y.y(), 0.3 * y.x());
  });
  const EnergyTriple bad =
      steady_adjoint_energy_check(rotation, zero_field(outer), z, FluidParams{}, 1e-10);
  EXPECT_LE(bad.inner_viscous, 1e-10);
  EXPECT_NEAR(bad.inner_fit.omega, 0.3, 1e-12);
  EXPECT_EQ(bad.conclusion, EnergyConclusion::kInconsistent);

  const EnergyTriple good =
      steady_adjoint_energy_check(zero_field(inner), zero_field(outer), z, FluidParams{}, 1e-10);
  EXPECT_LE(std::abs(good.inner_fit.omega), 1e-10);
  EXPECT_EQ(good.conclusion, EnergyConclusion::kTranslation);
}

}  // namespace
}  // namespace bubble
