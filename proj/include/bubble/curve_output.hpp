#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "bubble/surface_geometry.hpp"

namespace bubble {

struct CurveOptions {
  double amplitude = 0.3;
  int grid = 512;
  std::filesystem::path out_dir = ".";
  bool write_svg = true;
  bool write_csv = true;
};

struct EmittedCurve {
  std::string stem;  ///< file stem, e.g. "kernel_k2"
  Samples2<double> points;
  bool self_intersecting = false;
  int winding_number = 0;
  double kernel_residual = 0.0;  ///< max |n . dZ/ds| of the displacement
  std::vector<std::filesystem::path> files;
};

/// Points of (Id + amplitude * Z)(Gamma) for the displacement Z of `spec`.
Samples2<double> deformed_curve(const KernelFamilySpec& spec, double amplitude, int grid,
                                const AnnularGeometry& geom);

/// True when two non-adjacent edges of the closed polygon intersect.
bool polygon_self_intersects(const Samples2<double>& points);

/// Winding number of the closed polygon around `center`.
int winding_number(const Samples2<double>& points, const Eigen::Vector2d& center = {0, 0});

/// CSV with header `theta,x,y`, 17 significant digits, LF line endings.
std::string curve_csv(const Samples2<double>& points);

/// One closed path scaled into a 512x512 viewBox with a 5% margin.
std::string curve_svg(const Samples2<double>& points);

/// File stem for a spec: "circle" when empty, otherwise "kernel_k2_k5".
std::string curve_stem(const KernelFamilySpec& spec);

/// Writes every deformed curve as CSV and/or SVG into options.out_dir.
/// Self-intersecting curves are still written; a warning line goes to
/// `warnings` when it is non-null.
std::vector<EmittedCurve> emit_curves(const std::vector<KernelFamilySpec>& specs,
                                      const AnnularGeometry& geom, const CurveOptions& options,
                                      std::ostream* warnings = nullptr);

}  // namespace bubble
