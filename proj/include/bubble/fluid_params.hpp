#pragma once

#include <stdexcept>

namespace bubble {

/// Physical constants of the two fluids and the interface. "minus" is the
/// inner disk, "plus" the surrounding annulus.
struct FluidParams {
  double nu_plus = 1.0;
  double nu_minus = 1.0;
  double rho_plus = 1.0;
  double rho_minus = 1.0;
  double mu = 1.0;  ///< surface tension coefficient

  void validate() const {
    if (!(nu_plus > 0 && nu_minus > 0 && rho_plus > 0 && rho_minus > 0 &&
          mu > 0)) {
      throw std::invalid_argument(
          "FluidParams: viscosities, densities and mu must be positive");
    }
  }
};

/// Concentric configuration: interface circle of radius `r_s` inside the wall
/// circle of radius `R`, both centred at the origin.
struct AnnularGeometry {
  double r_s = 1.0;
  double R = 2.0;

  void validate() const {
    if (!(r_s > 0 && r_s < R)) {
      throw std::invalid_argument("AnnularGeometry: need 0 < r_s < R");
    }
  }
};

}  // namespace bubble
