#pragma once

#include <vector>

namespace bubble {

/// Largest Bessel order accepted by bessel_j().
inline constexpr int kMaxBesselOrder = 64;

/// Arguments up to this value are summed from the power series; larger
/// arguments use Miller's backward recurrence normalized by the Neumann sum
/// J_0 + 2 (J_2 + J_4 + ...) = 1.
inline constexpr double kBesselSeriesSwitch = 12.0;

/// Step of the sign-change scan used to bracket zeros.
inline constexpr double kZeroScanStep = 0.1;

/// The positive zeros of J_order, in increasing order.
struct BesselZeroTable {
  int order = 0;
  std::vector<double> zeros;
};

/// Bessel function of the first kind J_order(x) for integer order in
/// [0, kMaxBesselOrder] and x >= 0. Absolute error is below 1e-12 on
/// [0, 100]. Throws std::domain_error outside the domain.
double bessel_j(int order, double x);

/// d/dx J_order(x) from the three-term derivative relations.
double bessel_j_derivative(int order, double x);

/// First `count` positive zeros of J_order. Each zero is bracketed by a scan
/// with step kZeroScanStep and polished by safeguarded Newton iteration to
/// |J_order(z)| <= 1e-12. Results are cached per (order, count); the cache
/// is shared between threads and guarded by a mutex.
///
/// Throws std::domain_error when count < 1 and std::runtime_error when the
/// scan passes order + 10 * count * pi without collecting `count` zeros.
BesselZeroTable bessel_zeros(int order, int count);

}  // namespace bubble
