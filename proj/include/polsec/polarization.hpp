#pragma once

#include <complex>

#include <Eigen/Core>

namespace polsec {

using Complex = std::complex<double>;

// Complex field envelopes (E_x, E_y) in two orthogonal polarizations.
// Baseband convention: carrier and propagation factors are not modeled.
using JonesVector = Eigen::Vector2cd;

// Real 4-vector (S0, S1, S2, S3): total energy, horizontal/vertical balance,
// slant and circularity of the polarization state. For a fully polarized
// state S0^2 = S1^2 + S2^2 + S3^2.
using StokesVector = Eigen::Vector4d;

// (S1, S2, S3) alone; spans the Poincare sphere of radius S0.
using ReducedStokes = Eigen::Vector3d;

// Point on (or inside) the Poincare sphere in spherical coordinates.
struct SphericalCoords {
  double energy;     // radius, >= 0
  double elevation;  // [0, pi)
  double azimuth;    // [0, 2*pi)
};

// S = (|ex|^2+|ey|^2, |ex|^2-|ey|^2, 2 Re{ex ey*}, -2 Im{ex ey*}).
// The result is always fully polarized. Throws std::invalid_argument on
// non-finite input.
StokesVector jones_to_stokes(const JonesVector& e);

// Inverse of jones_to_stokes up to an unobservable global phase, fixed by the
// convention e = (sqrt((S0+S1)/2) exp(-j t/2), sqrt((S0-S1)/2) exp(+j t/2))
// with t = atan2(S3, S2) (t = 0 when S2 = S3 = 0).
//
// Requires a fully polarized state: throws std::domain_error if the input is
// depolarized beyond full_pol_tol (relative), std::invalid_argument if
// S0 <= 0.
JonesVector stokes_to_jones(const StokesVector& s, double full_pol_tol = 1e-6);

// Jones vector of the sphere point at (energy, elevation, azimuth):
// (sqrt(E) cos(el/2) exp(-j az/2), sqrt(E) sin(el/2) exp(+j az/2)).
JonesVector spherical_to_jones(const SphericalCoords& c);

// sqrt(S1^2+S2^2+S3^2)/S0 in [0,1]; 1 means fully polarized. Values within
// boundary_tol of the [0,1] limits are clamped. Throws std::invalid_argument
// if S0 <= 0.
double degree_of_polarization(const StokesVector& s, double boundary_tol = 1e-9);

// True when S0^2 = S1^2+S2^2+S3^2 within rel_tol (relative to S0^2).
bool is_fully_polarized(const StokesVector& s, double rel_tol = 1e-9);

// Stokes vector with S0 = 1 from a unit reduced vector.
inline StokesVector unit_stokes(const ReducedStokes& r) {
  return StokesVector(1.0, r.x(), r.y(), r.z());
}

inline ReducedStokes reduced(const StokesVector& s) { return s.tail<3>(); }

}  // namespace polsec
