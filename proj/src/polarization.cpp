#include "polsec/polarization.hpp"

#include <cmath>
#include <stdexcept>

namespace polsec {

namespace {

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

StokesVector jones_to_stokes(const JonesVector& e) {
  if (!finite(e(0)) || !finite(e(1))) {
    throw std::invalid_argument("jones_to_stokes: non-finite field component");
  }
  const double px = std::norm(e(0));
  const double py = std::norm(e(1));
  const Complex cross = e(0) * std::conj(e(1));
  return StokesVector(px + py, px - py, 2.0 * cross.real(), -2.0 * cross.imag());
}

JonesVector stokes_to_jones(const StokesVector& s, double full_pol_tol) {
  if (!(s(0) > 0.0)) {
    throw std::invalid_argument("stokes_to_jones: S0 must be positive");
  }
  const double pol2 = s(1) * s(1) + s(2) * s(2) + s(3) * s(3);
  if (std::abs(s(0) * s(0) - pol2) > full_pol_tol * s(0) * s(0)) {
    throw std::domain_error("stokes_to_jones: state is not fully polarized");
  }
  const double theta = (s(2) == 0.0 && s(3) == 0.0) ? 0.0 : std::atan2(s(3), s(2));
  const double ax = std::sqrt(std::max(0.0, 0.5 * (s(0) + s(1))));
  const double ay = std::sqrt(std::max(0.0, 0.5 * (s(0) - s(1))));
  return JonesVector(ax * std::polar(1.0, -0.5 * theta), ay * std::polar(1.0, 0.5 * theta));
}

JonesVector spherical_to_jones(const SphericalCoords& c) {
  if (!(c.energy >= 0.0) || !std::isfinite(c.energy)) {
    throw std::invalid_argument("spherical_to_jones: energy must be >= 0");
  }
  if (!(c.elevation >= 0.0 && c.elevation < M_PI)) {
    throw std::invalid_argument("spherical_to_jones: elevation out of [0, pi)");
  }
  if (!(c.azimuth >= 0.0 && c.azimuth < 2.0 * M_PI)) {
    throw std::invalid_argument("spherical_to_jones: azimuth out of [0, 2*pi)");
  }
  const double amp = std::sqrt(c.energy);
  return JonesVector(amp * std::cos(0.5 * c.elevation) * std::polar(1.0, -0.5 * c.azimuth),
                     amp * std::sin(0.5 * c.elevation) * std::polar(1.0, 0.5 * c.azimuth));
}

double degree_of_polarization(const StokesVector& s, double boundary_tol) {
  if (!(s(0) > 0.0)) {
    throw std::invalid_argument("degree_of_polarization: S0 must be positive");
  }
  const double dop = std::sqrt(s(1) * s(1) + s(2) * s(2) + s(3) * s(3)) / s(0);
  if (dop > 1.0 && dop <= 1.0 + boundary_tol) return 1.0;
  return dop;
}

bool is_fully_polarized(const StokesVector& s, double rel_tol) {
  if (!(s(0) > 0.0)) return false;
  const double pol2 = s(1) * s(1) + s(2) * s(2) + s(3) * s(3);
  return std::abs(s(0) * s(0) - pol2) <= rel_tol * s(0) * s(0);
}

}  // namespace polsec
