#include "bubble/cli/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bubble/control_analysis.hpp"
#include "bubble/mode_dynamics.hpp"
#include "bubble/radial_stokes.hpp"
#include "bubble/specfun.hpp"

namespace bubble::cli {

namespace {

// A check returns (measured, detail); it passes when measured <= threshold.
struct Check {
  const char* name;
  double threshold;
  std::function<std::pair<double, std::string>()> run;
};

SurfaceField<double> random_band_limited(std::mt19937_64& rng, int grid, int k_max) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd c(k_max + 1, 4);
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  return SurfaceField<double>::Sample(grid, 1.0, [&](double t) {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int k = 0; k <= k_max; ++k) {
      v.x() += c(k, 0) * std::cos(k * t) + c(k, 1) * std::sin(k * t);
      v.y() += c(k, 2) * std::cos(k * t) + c(k, 3) * std::sin(k * t);
    }
    return v;
  });
}

std::string with_grid(const char* what, int n) {
  return std::string(what) + " at N=" + std::to_string(n);
}

}  // namespace

VerifyLevel parse_verify_level(const std::string& text) {
  if (text == "fast") return VerifyLevel::kFast;
  if (text == "full") return VerifyLevel::kFull;
  throw std::invalid_argument("unknown verify level '" + text + "' (expected fast or full)");
}

int verify_radial_grid(VerifyLevel level) { return level == VerifyLevel::kFast ? 64 : 128; }
int verify_angular_grid(VerifyLevel level) { return level == VerifyLevel::kFast ? 128 : 256; }

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  const int n = verify_radial_grid(options.level);
  const int m_grid = verify_angular_grid(options.level);
  const FluidParams params{1.3, 0.7, 1.1, 0.9, 0.8};
  const AnnularGeometry geom{1.0, 2.0};

  const std::vector<Check> checks = {
      {"bessel_recurrence", 1e-10,
       [] {
         double worst = 0.0;
         for (int m = 1; m <= 10; ++m) {
           for (int i = 1; i <= 500; ++i) {
             const double x = 0.1 * i;
             worst = std::max(worst, std::abs(bessel_j(m - 1, x) + bessel_j(m + 1, x) -
                                              2.0 * m / x * bessel_j(m, x)));
           }
         }
         return std::make_pair(worst, std::string("m<=10, x in [0.1, 50]"));
       }},
      {"bessel_zero_residual", 1e-12,
       [] {
         double worst = 0.0;
         for (double z : bessel_zeros(1, 10).zeros) worst = std::max(worst, std::abs(bessel_j(1, z)));
         return std::make_pair(worst, std::string("first 10 zeros of J_1"));
       }},
      {"kernel_family_residual", 1e-10,
       [&] {
         double worst = 0.0;
         for (int k = 2; k <= 7; ++k) {
           KernelFamilySpec spec;
           spec.set(k, 1.0, 0.0);
           const auto z = kernel_displacement(spec, m_grid, geom, options.orientation);
           worst = std::max(worst, normal_stretch(z).cwiseAbs().maxCoeff());
         }
         return std::make_pair(worst, "k=2..7, M=" + std::to_string(m_grid));
       }},
      {"projector_decomposition", 1e-10,
       [&] {
         std::mt19937_64 rng(2024);
         double worst = 0.0;
         for (int trial = 0; trial < 20; ++trial) {
           const auto z = random_band_limited(rng, m_grid, m_grid / 8);
           const auto lhs = tangential_feedback(z) + surface_divergence(normal_projected_gradient(z));
           worst = std::max(worst, (lhs - laplace_beltrami(z)).samples().cwiseAbs().maxCoeff());
         }
         return std::make_pair(worst, "20 fields, M=" + std::to_string(m_grid));
       }},
      {"laplace_beltrami_symmetry", 1e-12,
       [&] {
         std::mt19937_64 rng(77);
         const auto a = random_band_limited(rng, m_grid, m_grid / 8);
         const auto b = random_band_limited(rng, m_grid, m_grid / 8);
         const double ab = surface_inner_product(laplace_beltrami(a), b);
         const double ba = surface_inner_product(a, laplace_beltrami(b));
         return std::make_pair(std::abs(ab - ba) / std::abs(ab), std::string("relative"));
       }},
      {"swirl_spectrum_match", 1e-3,
       [&] {
         const double exact = swirl_spectrum_analytic(params, geom, 1).entries[0].lambda;
         const double num =
             stokes_spectrum_numeric(0, params, geom, n, 1, StokesSide::kInner).entries[0].lambda;
         return std::make_pair(std::abs(num - exact) / exact, with_grid("relative", n));
       }},
      {"energy_monotonicity", 0.0,
       [&] {
         double worst = -1e300;
         for (int mode : {0, 2}) {
           ModeStepper s(assemble_mode_system(mode, params, geom, Domain::kTwoPhase, n, n),
                         0.5 / 200);
           SimulationInput input;
           input.steps = 200;
           input.initial = seeded_normal(s.state_size(), 5 + mode);
           const auto traj = simulate(s, input);
           for (std::size_t k = 1; k < traj.size(); ++k) {
             worst = std::max(worst, traj[k].energy - traj[k - 1].energy);
           }
         }
         return std::make_pair(worst, with_grid("max E_{k+1} - E_k, m in {0, 2}, 200 steps", n));
       }},
      {"duality_residual", 1e-10,
       [&] {
         DualityOptions opt;
         opt.n_inner = opt.n_outer = n;
         return std::make_pair(duality_check(params, geom, opt).residual,
                               with_grid("m=2, T=0.5, 100 steps", n));
       }},
      {"adjoint_transpose", 1e-12,
       [&] {
         ModeStepper s(assemble_mode_system(2, params, geom, Domain::kTwoPhase, n, n), 0.005);
         double worst = 0.0;
         for (int draw = 0; draw < 10; ++draw) {
           const Eigen::VectorXd x = seeded_normal(s.state_size(), 1000 + draw);
           const Eigen::VectorXd y = seeded_normal(s.state_size(), 2000 + draw);
           const double lhs = s.apply(x).dot(y);
           const double rhs = x.dot(s.apply_transpose(y));
           worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs)));
         }
         return std::make_pair(worst, with_grid("10 draws", n));
       }},
  };

  std::vector<CheckResult> results;
  for (const Check& c : checks) {
    CheckResult r;
    r.name = c.name;
    r.threshold = c.threshold;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto [measured, detail] = c.run();
      r.measured = measured;
      r.detail = detail;
      r.pass = std::isfinite(measured) && measured <= c.threshold;
    } catch (const std::exception& e) {
      r.pass = false;
      r.measured = std::nan("");
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

std::string verify_table(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-26s %-6s %-12s %-10s %-8s %s\n", "check", "status",
                "measured", "threshold", "seconds", "detail");
  out << line;
  for (const CheckResult& r : results) {
    std::snprintf(line, sizeof(line), "%-26s %-6s %-12.4g %-10.3g %-8.3f %s\n", r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.measured, r.threshold, r.seconds, r.detail.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace bubble::cli
