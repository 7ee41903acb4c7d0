#include "polsec/rng.hpp"

#include <cmath>

namespace polsec {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::complex<double> RngStream::complex_gaussian(double variance) {
  const double sigma = std::sqrt(0.5 * variance);
  return {sigma * gaussian(), sigma * gaussian()};
}

Eigen::Vector3d RngStream::unit_vector() {
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(gaussian(), gaussian(), gaussian());
  } while (v.norm() == 0.0);
  return v.normalized();
}

}  // namespace polsec
