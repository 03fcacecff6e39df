#pragma once

// The invariant suite behind `bubble verify`.

#include <string>
#include <vector>

#include "bubble/surface_geometry.hpp"

namespace bubble::cli {

enum class VerifyLevel { kFast, kFull };

VerifyLevel parse_verify_level(const std::string& text);

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::kFast;
  /// Only changed to exercise the suite itself: the counter-clockwise
  /// tangent breaks the kernel-family check.
  TangentOrientation orientation = TangentOrientation::kClockwise;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

/// Radial intervals N and angular samples M used at a level: 64/128 for
/// fast, doubled for full.
int verify_radial_grid(VerifyLevel level);
int verify_angular_grid(VerifyLevel level);

std::vector<CheckResult> run_verify(const VerifyOptions& options);

/// Fixed-width summary, one row per check.
std::string verify_table(const std::vector<CheckResult>& results);

}  // namespace bubble::cli
