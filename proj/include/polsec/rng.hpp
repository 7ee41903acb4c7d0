#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace polsec {

// Mixes a 64-bit word through one splitmix64 round. Used to derive
// independent stream seeds from (master seed, stream index) so that results
// never depend on how streams are scheduled across workers.
std::uint64_t splitmix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Seeded random stream. One stream per trial / shard; all randomness a trial
// consumes comes from its own stream, in a fixed order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed ^ 0x1d8e4e27c47d124fULL)) {}

  static RngStream derive(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(derive_seed(master_seed, index));
  }
  static RngStream derive(std::uint64_t master_seed, std::uint64_t hi, std::uint64_t lo) {
    return RngStream(derive_seed(derive_seed(master_seed, hi), lo));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint32_t uniform_index(std::uint32_t n) {
    return static_cast<std::uint32_t>(uniform() * n) % n;
  }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Standard normal via the Marsaglia polar method; the spare deviate is
  // cached so draws come in a fixed per-stream order.
  double gaussian();

  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance);

  // Uniform direction on the unit sphere: normalized 3-dimensional Gaussian.
  Eigen::Vector3d unit_vector();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polsec
