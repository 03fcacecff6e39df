#include "bubble/curve_output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bubble/number_format.hpp"

namespace bubble {
namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace

Samples2<double> deformed_curve(const KernelFamilySpec& spec, double amplitude, int grid,
                                const AnnularGeometry& geom) {
  const SurfaceField<double> z = kernel_displacement<double>(spec, grid, geom);
  Samples2<double> points(grid, 2);
  for (int j = 0; j < grid; ++j) {
    points.row(j) = (geom.r_s * unit_normal(z.theta(j)) + amplitude * z.at(j)).transpose();
  }
  return points;
}

bool polygon_self_intersects(const Samples2<double>& points) {
  const int n = static_cast<int>(points.rows());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p1 = points.row(i).transpose();
    const Eigen::Vector2d p2 = points.row((i + 1) % n).transpose();
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // edges sharing the closing vertex
      const Eigen::Vector2d q1 = points.row(j).transpose();
      const Eigen::Vector2d q2 = points.row((j + 1) % n).transpose();
      if (segments_intersect(p1, p2, q1, q2)) return true;
    }
  }
  return false;
}

int winding_number(const Samples2<double>& points, const Eigen::Vector2d& center) {
  const int n = static_cast<int>(points.rows());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d a = points.row(i).transpose() - center;
    const Eigen::Vector2d b = points.row((i + 1) % n).transpose() - center;
    total += std::atan2(cross(a, b), a.dot(b));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

std::string curve_csv(const Samples2<double>& points) {
  std::ostringstream out;
  out << "theta,x,y\n";
  const int n = static_cast<int>(points.rows());
  for (int j = 0; j < n; ++j) {
    out << format_double(SurfaceField<double>::grid_angle<double>(j, n)) << ','
        << format_double(points(j, 0)) << ',' << format_double(points(j, 1)) << '\n';
  }
  return out.str();
}

std::string curve_svg(const Samples2<double>& points) {
  constexpr double kSize = 512.0;
  constexpr double kMargin = 0.05 * kSize;
  const Eigen::Vector2d lo = points.colwise().minCoeff().transpose();
  const Eigen::Vector2d hi = points.colwise().maxCoeff().transpose();
  const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
  const double scale = (kSize - 2.0 * kMargin) / extent;
  const Eigen::Vector2d mid = 0.5 * (lo + hi);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 512 512\" width=\"512\" "
         "height=\"512\">\n<path fill=\"none\" stroke=\"black\" stroke-width=\"2\" d=\"";
  const int n = static_cast<int>(points.rows());
  char buffer[64];
  for (int j = 0; j < n; ++j) {
    const double x = kSize / 2 + scale * (points(j, 0) - mid.x());
    const double y = kSize / 2 - scale * (points(j, 1) - mid.y());  // SVG y points down
    std::snprintf(buffer, sizeof(buffer), "%s%.4f %.4f", j == 0 ? "M" : " L", x, y);
    out << buffer;
  }
  out << " Z\"/>\n</svg>\n";
  return out.str();
}

std::string curve_stem(const KernelFamilySpec& spec) {
  if (spec.empty()) return "circle";
  std::string stem = "kernel";
  for (const auto& [k, ab] : spec.coefficients()) stem += "_k" + std::to_string(k);
  return stem;
}

std::vector<EmittedCurve> emit_curves(const std::vector<KernelFamilySpec>& specs,
                                      const AnnularGeometry& geom, const CurveOptions& options,
                                      std::ostream* warnings) {
  geom.validate();
  std::filesystem::create_directories(options.out_dir);
  std::vector<EmittedCurve> curves;
  for (const KernelFamilySpec& spec : specs) {
    EmittedCurve curve;
    curve.stem = curve_stem(spec);
    curve.points = deformed_curve(spec, options.amplitude, options.grid, geom);
    curve.self_intersecting = polygon_self_intersects(curve.points);
    curve.winding_number = winding_number(curve.points);
    curve.kernel_residual =
        normal_stretch(kernel_displacement<double>(spec, options.grid, geom)).cwiseAbs().maxCoeff();
    if (curve.self_intersecting && warnings != nullptr) {
      *warnings << "warning: curve " << curve.stem << " self-intersects at amplitude "
                << options.amplitude << '\n';
    }
    if (options.write_csv) {
      curve.files.push_back(options.out_dir / (curve.stem + ".csv"));
      write_file(curve.files.back(), curve_csv(curve.points));
    }
    if (options.write_svg) {
      curve.files.push_back(options.out_dir / (curve.stem + ".svg"));
      write_file(curve.files.back(), curve_svg(curve.points));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace bubble
