#pragma once

// Fields and surface differential operators on the reference interface
// circle. All operators are spectral: samples on the uniform angular grid
// theta_j = 2 pi j / M are treated as values of the trigonometric
// interpolant, which is differentiated exactly.
//
// Conventions:
//   n   = (cos theta, sin theta), the outward unit normal;
//   tau = n rotated by -pi/2 = (sin theta, -cos theta), the clockwise unit
//         tangent. With this orientation both rigid translations and the
//         displacement family built by kernel_displacement() are annihilated
//         by the normal-projected gradient.
//   grad_G Z = (dZ/ds) (x) tau and div_G A = d/ds (A tau), s = r_s theta.

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "bubble/fluid_params.hpp"

namespace bubble {

enum class TangentOrientation { kClockwise, kCounterClockwise };

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Samples2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

/// Vector field on the interface circle sampled on a uniform angular grid of
/// even size M >= 8.
template <typename Scalar = double>
class SurfaceField {
 public:
  SurfaceField(Samples2<Scalar> samples, Scalar radius)
      : samples_(std::move(samples)), radius_(radius) {
    const auto m = samples_.rows();
    if (m < 8 || m % 2 != 0) {
      throw std::invalid_argument("SurfaceField: grid size must be even and >= 8");
    }
    if (!(radius_ > Scalar(0))) {
      throw std::invalid_argument("SurfaceField: radius must be positive");
    }
  }

  static SurfaceField Zero(int grid, Scalar radius) {
    return SurfaceField(Samples2<Scalar>::Zero(grid, 2), radius);
  }

  /// Samples `f(theta) -> Vector2` on the grid.
  template <typename F>
  static SurfaceField Sample(int grid, Scalar radius, F&& f) {
    Samples2<Scalar> s(grid, 2);
    for (int j = 0; j < grid; ++j) {
      s.row(j) = f(grid_angle<Scalar>(j, grid)).transpose();
    }
    return SurfaceField(std::move(s), radius);
  }

  template <typename T>
  static T grid_angle(int j, int grid) {
    return T(2) * std::numbers::pi_v<T> * T(j) / T(grid);
  }

  int size() const { return static_cast<int>(samples_.rows()); }
  Scalar radius() const { return radius_; }
  Scalar theta(int j) const { return grid_angle<Scalar>(j, size()); }
  Vector2<Scalar> at(int j) const { return samples_.row(j).transpose(); }

  const Samples2<Scalar>& samples() const { return samples_; }
  Samples2<Scalar>& samples() { return samples_; }

  SurfaceField& operator+=(const SurfaceField& other) {
    check_compatible(other);
    samples_ += other.samples_;
    return *this;
  }
  SurfaceField& operator-=(const SurfaceField& other) {
    check_compatible(other);
    samples_ -= other.samples_;
    return *this;
  }
  SurfaceField& operator*=(Scalar s) {
    samples_ *= s;
    return *this;
  }
  friend SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
  friend SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
  friend SurfaceField operator*(Scalar s, SurfaceField a) { return a *= s; }

  void check_compatible(const SurfaceField& other) const {
    if (other.size() != size() || other.radius() != radius()) {
      throw std::invalid_argument("SurfaceField: grid or radius mismatch");
    }
  }

 private:
  Samples2<Scalar> samples_;
  Scalar radius_;
};

/// 2x2 matrix per grid node, e.g. grad_G Z or its projections.
template <typename Scalar = double>
struct MatrixField {
  std::vector<Eigen::Matrix<Scalar, 2, 2>> values;
  Scalar radius;
  int size() const { return static_cast<int>(values.size()); }
};

/// Coefficients (a_k, b_k), k >= 2, of the displacement family annihilated by
/// the normal-projected gradient.
class KernelFamilySpec {
 public:
  KernelFamilySpec() = default;

  KernelFamilySpec& set(int k, double a, double b) {
    if (k < 2) {
      throw std::invalid_argument(
          "KernelFamilySpec: wavenumbers below 2 are not allowed (k^2 - 1 "
          "vanishes at k = 1)");
    }
    coefficients_[k] = {a, b};
    return *this;
  }

  const std::map<int, std::pair<double, double>>& coefficients() const {
    return coefficients_;
  }
  bool empty() const { return coefficients_.empty(); }
  /// Largest active wavenumber, or 0 for an empty spec.
  int truncation() const {
    return coefficients_.empty() ? 0 : coefficients_.rbegin()->first;
  }

 private:
  std::map<int, std::pair<double, double>> coefficients_;
};

// ---------------------------------------------------------------------------
// Frames and scalar geometry.

template <typename Scalar>
Vector2<Scalar> unit_normal(Scalar theta) {
  using std::cos;
  using std::sin;
  return {cos(theta), sin(theta)};
}

template <typename Scalar>
Vector2<Scalar> unit_tangent(Scalar theta,
                             TangentOrientation orientation = TangentOrientation::kClockwise) {
  using std::cos;
  using std::sin;
  const Scalar sign = orientation == TangentOrientation::kClockwise ? Scalar(1) : Scalar(-1);
  return {sign * sin(theta), -sign * cos(theta)};
}

inline double curvature(const AnnularGeometry& geom) { return 1.0 / geom.r_s; }

/// Young-Laplace pressure jump mu * kappa across a circular interface at rest.
inline double young_laplace_jump(const FluidParams& params, const AnnularGeometry& geom) {
  return params.mu * curvature(geom);
}

// ---------------------------------------------------------------------------
// Spectral differentiation.

namespace internal {

/// `order`-th derivative in theta of each column, via the trigonometric
/// interpolant. The Nyquist coefficient is dropped for odd orders.
template <typename Scalar>
Samples2<Scalar> periodic_derivative(const Samples2<Scalar>& samples, int order) {
  using Complex = std::complex<Scalar>;
  const int m = static_cast<int>(samples.rows());
  Eigen::FFT<Scalar> fft;
  Samples2<Scalar> out(m, 2);
  std::vector<Scalar> column(m);
  std::vector<Complex> spectrum;
  std::vector<Scalar> back;
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < m; ++j) column[j] = samples(j, c);
    fft.fwd(spectrum, column);
    for (int k = 0; k < m; ++k) {
      const int wave = k <= m / 2 ? k : k - m;
      Complex factor(1);
      for (int p = 0; p < order; ++p) factor *= Complex(0, Scalar(wave));
      if (k == m / 2 && order % 2 == 1) factor = Complex(0);
      spectrum[k] *= factor;
    }
    fft.inv(back, spectrum);
    for (int j = 0; j < m; ++j) out(j, c) = back[j];
  }
  return out;
}

}  // namespace internal

/// dZ/ds.
template <typename Scalar>
SurfaceField<Scalar> tangential_derivative(const SurfaceField<Scalar>& z) {
  Samples2<Scalar> d = internal::periodic_derivative(z.samples(), 1);
  d /= z.radius();
  return SurfaceField<Scalar>(std::move(d), z.radius());
}

/// Componentwise d^2 Z / ds^2.
template <typename Scalar>
SurfaceField<Scalar> laplace_beltrami(const SurfaceField<Scalar>& z) {
  Samples2<Scalar> d = internal::periodic_derivative(z.samples(), 2);
  d /= z.radius() * z.radius();
  return SurfaceField<Scalar>(std::move(d), z.radius());
}

/// sigma(theta) = n . dZ/ds, the scalar content of the normal-projected
/// gradient.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> normal_stretch(const SurfaceField<Scalar>& z) {
  const SurfaceField<Scalar> dz = tangential_derivative(z);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sigma(z.size());
  for (int j = 0; j < z.size(); ++j) sigma[j] = unit_normal(z.theta(j)).dot(dz.at(j));
  return sigma;
}

/// grad_G Z = (dZ/ds) (x) tau at every node.
template <typename Scalar>
MatrixField<Scalar> surface_gradient(const SurfaceField<Scalar>& z,
                                     TangentOrientation orientation = TangentOrientation::kClockwise) {
  const SurfaceField<Scalar> dz = tangential_derivative(z);
  MatrixField<Scalar> out{{}, z.radius()};
  out.values.reserve(z.size());
  for (int j = 0; j < z.size(); ++j) {
    out.values.push_back(dz.at(j) * unit_tangent(z.theta(j), orientation).transpose());
  }
  return out;
}

/// (n (x) n) grad_G Z = (n . dZ/ds) n (x) tau.
template <typename Scalar>
MatrixField<Scalar> normal_projected_gradient(
    const SurfaceField<Scalar>& z,
    TangentOrientation orientation = TangentOrientation::kClockwise) {
  MatrixField<Scalar> g = surface_gradient(z, orientation);
  for (int j = 0; j < z.size(); ++j) {
    const Vector2<Scalar> n = unit_normal(z.theta(j));
    g.values[j] = (n * n.transpose()) * g.values[j];
  }
  return g;
}

/// div_G A = d/ds (A tau).
template <typename Scalar>
SurfaceField<Scalar> surface_divergence(const MatrixField<Scalar>& a,
                                        TangentOrientation orientation = TangentOrientation::kClockwise) {
  const int m = a.size();
  Samples2<Scalar> flux(m, 2);
  for (int j = 0; j < m; ++j) {
    const Scalar theta = SurfaceField<Scalar>::template grid_angle<Scalar>(j, m);
    flux.row(j) = (a.values[j] * unit_tangent(theta, orientation)).transpose();
  }
  return tangential_derivative(SurfaceField<Scalar>(std::move(flux), a.radius));
}

/// div_G((tau (x) tau) grad_G Z), the tangential feedback that turns the
/// degenerate operator div_G (n (x) n) grad_G into the Laplace-Beltrami
/// operator.
template <typename Scalar>
SurfaceField<Scalar> tangential_feedback(const SurfaceField<Scalar>& z,
                                         TangentOrientation orientation = TangentOrientation::kClockwise) {
  MatrixField<Scalar> g = surface_gradient(z, orientation);
  for (int j = 0; j < z.size(); ++j) {
    const Vector2<Scalar> t = unit_tangent(z.theta(j), orientation);
    g.values[j] = (t * t.transpose()) * g.values[j];
  }
  return surface_divergence(g, orientation);
}

/// Trapezoidal surface inner product, weight 2 pi r_s / M per node.
template <typename Scalar>
Scalar surface_inner_product(const SurfaceField<Scalar>& a, const SurfaceField<Scalar>& b) {
  a.check_compatible(b);
  const Scalar weight = Scalar(2) * std::numbers::pi_v<Scalar> * a.radius() / Scalar(a.size());
  return weight * a.samples().cwiseProduct(b.samples()).sum();
}

/// int_G |grad_G Z|^2 ds.
template <typename Scalar>
Scalar surface_dirichlet_energy(const SurfaceField<Scalar>& z) {
  const SurfaceField<Scalar> dz = tangential_derivative(z);
  return surface_inner_product(dz, dz);
}

/// Evaluates sum_k [ (a_k cos k theta + b_k sin k theta) n
///                  + k (-b_k cos k theta + a_k sin k theta) tau ] / (k^2 - 1)
/// on the grid, in Cartesian components.
template <typename Scalar = double>
SurfaceField<Scalar> kernel_displacement(const KernelFamilySpec& spec, int grid,
                                         const AnnularGeometry& geom,
                                         TangentOrientation orientation = TangentOrientation::kClockwise) {
  const Scalar radius = static_cast<Scalar>(geom.r_s);
  return SurfaceField<Scalar>::Sample(grid, radius, [&](Scalar theta) {
    using std::cos;
    using std::sin;
    Scalar normal_part(0);
    Scalar tangent_part(0);
    for (const auto& [k, ab] : spec.coefficients()) {
      const Scalar a = static_cast<Scalar>(ab.first);
      const Scalar b = static_cast<Scalar>(ab.second);
      const Scalar kk = static_cast<Scalar>(k);
      const Scalar scale = Scalar(1) / (kk * kk - Scalar(1));
      const Scalar c = cos(kk * theta);
      const Scalar s = sin(kk * theta);
      normal_part += scale * (a * c + b * s);
      tangent_part += scale * kk * (-b * c + a * s);
    }
    return Vector2<Scalar>(normal_part * unit_normal(theta) +
                           tangent_part * unit_tangent(theta, orientation));
  });
}

}  // namespace bubble
