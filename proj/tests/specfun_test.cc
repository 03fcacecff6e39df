#include "bubble/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

namespace bubble {
namespace {

// Independent oracle: plain power series of J_1 in long double, summed to a
// fixed number of terms, and bisection on it. Only valid for small x.
long double j1_series(long double x) {
  long double term = x / 2;
  long double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4) / (k * (k + 1.0L));
    sum += term;
  }
  return sum;
}

double bisect_j1(double lo, double hi) {
  long double a = lo, b = hi;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (a + b) / 2;
    if ((j1_series(a) < 0) == (j1_series(mid) < 0)) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return static_cast<double>((a + b) / 2);
}

GTEST_TEST(BesselJ, MatchesStdLibraryOnWideRange) {
  double worst = 0.0;
  for (int order : {0, 1, 2, 3, 5, 10, 20, 40, 64}) {
    for (double x = 0.0; x <= 100.0; x += 0.37) {
      const double expected = std::cyl_bessel_j(static_cast<double>(order), x);
      worst = std::max(worst, std::abs(bessel_j(order, x) - expected));
    }
  }
  EXPECT_LE(worst, 1e-12);
}

GTEST_TEST(BesselJ, ValuesAtOrigin) {
  EXPECT_EQ(bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(bessel_j(1, 0.0), 0.0);
  EXPECT_EQ(bessel_j(7, 0.0), 0.0);
}

GTEST_TEST(BesselJ, FirstZeroAgreesWithSeriesBisection) {
  const double z = bisect_j1(3.0, 4.0);
  EXPECT_NEAR(z, 3.8317059702, 1e-9);
  EXPECT_NEAR(bessel_j(1, 3.8317059702), 0.0, 1e-9);
  EXPECT_NEAR(bessel_zeros(1, 1).zeros[0], z, 1e-12);
}

GTEST_TEST(BesselJ, SecondZeroBracket) {
  const BesselZeroTable t = bessel_zeros(1, 2);
  ASSERT_EQ(t.zeros.size(), 2u);
  EXPECT_GT(t.zeros[1], 7.0);
  EXPECT_LT(t.zeros[1], 7.1);
  EXPECT_NEAR(t.zeros[1], bisect_j1(7.0, 7.1), 1e-12);
}

GTEST_TEST(BesselJ, ThreeTermRecurrence) {
  double worst = 0.0;
  for (int m = 1; m <= 10; ++m) {
    for (double x = 0.1; x <= 50.0; x += 0.1) {
      const double r = bessel_j(m - 1, x) + bessel_j(m + 1, x) - 2.0 * m / x * bessel_j(m, x);
      worst = std::max(worst, std::abs(r));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

GTEST_TEST(BesselJ, DerivativeMatchesFiniteDifference) {
  const double h = 1e-5;
  for (int m : {0, 1, 4, 64}) {
    for (double x : {0.5, 3.0, 11.9, 12.1, 40.0, 90.0}) {
      const double fd = (bessel_j(m, x + h) - bessel_j(m, x - h)) / (2 * h);
      EXPECT_NEAR(bessel_j_derivative(m, x), fd, 1e-9) << "m=" << m << " x=" << x;
    }
  }
  EXPECT_EQ(bessel_j_derivative(1, 0.0), 0.5);
  EXPECT_EQ(bessel_j_derivative(0, 0.0), 0.0);
}

GTEST_TEST(BesselJ, DomainErrors) {
  EXPECT_THROW(bessel_j(-1, 1.0), std::domain_error);
  EXPECT_THROW(bessel_j(kMaxBesselOrder + 1, 1.0), std::domain_error);
  EXPECT_THROW(bessel_j(1, -0.5), std::domain_error);
  EXPECT_THROW(bessel_zeros(1, 0), std::domain_error);
}

GTEST_TEST(BesselZeros, ResidualsAndStdAgreement) {
  const BesselZeroTable t = bessel_zeros(1, 30);
  ASSERT_EQ(t.zeros.size(), 30u);
  for (double z : t.zeros) {
    EXPECT_LE(std::abs(bessel_j(1, z)), 1e-12);
    EXPECT_LE(std::abs(std::cyl_bessel_j(1.0, z)), 1e-12);
  }
}

GTEST_TEST(BesselZeros, Interlacing) {
  for (int order = 0; order < 6; ++order) {
    const auto lo = bessel_zeros(order, 8).zeros;
    const auto hi = bessel_zeros(order + 1, 8).zeros;
    for (int k = 0; k < 8; ++k) {
      EXPECT_LT(lo[k], hi[k]);
      if (k + 1 < 8) EXPECT_LT(hi[k], lo[k + 1]);
    }
  }
}

GTEST_TEST(BesselZeros, SpacingApproachesPiMonotonically) {
  const auto z = bessel_zeros(1, 20).zeros;
  double previous = 1e9;
  for (int k = 2; k + 1 < 20; ++k) {
    const double gap = std::abs((z[k + 1] - z[k]) - std::numbers::pi);
    EXPECT_LT(gap, previous) << "k=" << k + 1;
    previous = gap;
  }
}

GTEST_TEST(BesselZeros, HighOrderAndDeterminism) {
  const auto a = bessel_zeros(40, 5);
  const auto b = bessel_zeros(40, 5);
  ASSERT_EQ(a.zeros.size(), 5u);
  EXPECT_EQ(a.zeros, b.zeros);
  EXPECT_GT(a.zeros[0], 40.0);
  // A longer table extends the shorter one.
  const auto longer = bessel_zeros(40, 7);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(a.zeros[k], longer.zeros[k]);
}

}  // namespace
}  // namespace bubble
