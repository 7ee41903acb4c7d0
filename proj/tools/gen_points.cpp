// Regenerates the baked constellation tables under data/constellations.
// Usage: polsec_gen_points <m> <seed> <iterations> <out-file>

#include <cstdio>
#include <cstdlib>

#include "polsec/constellation.hpp"

int main(int argc, char** argv) {
  if (argc != 5) {
    std::fprintf(stderr, "usage: %s <m> <seed> <iterations> <out-file>\n", argv[0]);
    return 2;
  }
  const int m = std::atoi(argv[1]);
  const std::uint64_t seed = std::strtoull(argv[2], nullptr, 10);
  const int iterations = std::atoi(argv[3]);

  const auto points = polsec::repulsion_points(m, seed, iterations);
  polsec::save_point_table(points, argv[4]);
  std::printf("m=%d seed=%llu iters=%d min_angle=%.12f rad (%.6f deg)\n", m,
              static_cast<unsigned long long>(seed), iterations,
              polsec::min_pairwise_angle(points),
              polsec::min_pairwise_angle(points) * 180.0 / M_PI);
  return 0;
}
