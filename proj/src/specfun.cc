#include "bubble/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace bubble {
namespace {

void check_domain(int order, double x) {
  if (order < 0 || order > kMaxBesselOrder) {
    throw std::domain_error("bessel_j: order " + std::to_string(order) +
                            " outside [0, " +
                            std::to_string(kMaxBesselOrder) + "]");
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("bessel_j: argument must be non-negative");
  }
}

// sum_m (-1)^m / (m! (m+order)!) (x/2)^(2m+order), accumulated in extended
// precision so that the cancellation at x ~ kBesselSeriesSwitch stays well
// below 1e-12.
double series(int order, double x) {
  const long double half = 0.5L * static_cast<long double>(x);
  const long double q = -half * half;
  long double term = 1.0L;
  for (int k = 1; k <= order; ++k) term *= half / static_cast<long double>(k);
  long double sum = term;
  for (int m = 1; m < 1000; ++m) {
    term *= q / (static_cast<long double>(m) * static_cast<long double>(m + order));
    if (std::fabs(term) < 1e-18L * (std::fabs(sum) + 1e-300L)) break;
    sum += term;
  }
  return static_cast<double>(sum);
}

double miller(int order, double x) {
  const double top = std::max(static_cast<double>(order), x);
  int start = static_cast<int>(top + std::sqrt(160.0 * top)) + 20;
  if (start % 2 != 0) ++start;

  constexpr double kBig = 1e250;
  double next = 0.0;  // J_{k+1}, unnormalized
  double current = 1e-300;
  double wanted = 0.0;
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double previous = 2.0 * k / x * current - next;  // J_{k-1}
    next = current;
    current = previous;
    if (std::fabs(current) > kBig) {
      current /= kBig;
      next /= kBig;
      wanted /= kBig;
      norm /= kBig;
    }
    // `current` now holds the unnormalized J_{k-1}.
    if (k - 1 == order) wanted = current;
    if (k - 1 > 0 && (k - 1) % 2 == 0) norm += 2.0 * current;
  }
  norm += current;  // J_0
  return wanted / norm;
}

}  // namespace

double bessel_j(int order, double x) {
  check_domain(order, x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (x <= kBesselSeriesSwitch) return series(order, x);
  return miller(order, x);
}

double bessel_j_derivative(int order, double x) {
  if (order == 0) return -bessel_j(1, x);
  if (x == 0.0) {
    check_domain(order, x);
    return order == 1 ? 0.5 : 0.0;
  }
  // J_n' = J_{n-1} - (n/x) J_n stays inside the supported order range.
  return bessel_j(order - 1, x) - order / x * bessel_j(order, x);
}

namespace {

double polish_zero(int order, double lo, double hi) {
  double f_lo = bessel_j(order, lo);
  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = bessel_j(order, z);
    if (f == 0.0) return z;
    if ((f < 0.0) == (f_lo < 0.0)) {
      lo = z;
      f_lo = f;
    } else {
      hi = z;
    }
    const double df = bessel_j_derivative(order, z);
    double candidate = df != 0.0 ? z - f / df : lo - 1.0;
    // Newton iterates that leave the bracket fall back to bisection.
    if (!(candidate > lo && candidate < hi)) candidate = 0.5 * (lo + hi);
    const double step = std::fabs(candidate - z);
    z = candidate;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * z ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * z) {
      break;
    }
  }
  return z;
}

BesselZeroTable compute_zeros(int order, int count) {
  BesselZeroTable table;
  table.order = order;
  const double limit = order + 10.0 * count * std::numbers::pi;
  double a = order == 0 ? 0.0 : kZeroScanStep;
  double fa = bessel_j(order, a);
  for (int i = 1; static_cast<int>(table.zeros.size()) < count; ++i) {
    const double b = (order == 0 ? 0.0 : kZeroScanStep) + i * kZeroScanStep;
    if (b > limit) {
      throw std::runtime_error(
          "bessel_zeros: scan exhausted before finding " +
          std::to_string(count) + " zeros of J_" + std::to_string(order));
    }
    const double fb = bessel_j(order, b);
    if (fb == 0.0) {
      table.zeros.push_back(b);
    } else if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
      table.zeros.push_back(polish_zero(order, a, b));
    }
    a = b;
    fa = fb;
  }
  return table;
}

}  // namespace

BesselZeroTable bessel_zeros(int order, int count) {
  if (count < 1) throw std::domain_error("bessel_zeros: count must be >= 1");
  check_domain(order, 0.0);

  static std::mutex mutex;
  static std::map<std::pair<int, int>, BesselZeroTable> cache;
  const auto key = std::make_pair(order, count);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  BesselZeroTable table = compute_zeros(order, count);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace bubble
