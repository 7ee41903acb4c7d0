#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polsec/polarization.hpp"
#include "polsec/rng.hpp"

namespace polsec {

// Symbol set on the Poincare sphere: M unit reduced-Stokes vectors plus a
// bijective bit labeling. Immutable after construction.
struct SphereConstellation {
  int size = 0;             // M, power of two in 2..32
  int bits_per_symbol = 0;  // log2(M)
  std::vector<ReducedStokes> points;
  std::vector<int> label_to_point;  // bit label -> point index
  std::vector<int> point_to_label;
  double min_angle = 0.0;  // smallest pairwise angle, radians
};

// Canonical point sets: M=2 poles, M=4 regular tetrahedron, M=8 square
// antiprism with all nearest-neighbor distances equal, M=16/32 loaded from
// the repulsion-optimized tables under data/constellations. Labels follow a
// Gray sequence along a greedy nearest-neighbor walk of the points, so
// adjacent labels land on nearby points. Throws std::invalid_argument for
// unsupported sizes.
SphereConstellation build_constellation(int m);

// Smallest pairwise angle of a point set, radians.
double min_pairwise_angle(const std::vector<ReducedStokes>& points);

// Stokes vector (1, point) for a bit block of exactly bits_per_symbol bits,
// MSB first. Throws std::invalid_argument on wrong block length.
StokesVector map_bits(const SphereConstellation& c, std::span<const std::uint8_t> bits);

// Label of the constellation point nearest to s/S0 in Euclidean distance;
// ties resolved toward the lowest point index. Throws std::invalid_argument
// if S0 <= 0.
int demap_label(const SphereConstellation& c, const StokesVector& s);

// demap_label expanded to bits, MSB first.
std::vector<std::uint8_t> demap(const SphereConstellation& c, const StokesVector& s);

// Max-min-distance point set by seeded inverse-power repulsion with step
// decay. Deterministic for fixed (m, seed, iterations).
std::vector<ReducedStokes> repulsion_points(int m, std::uint64_t seed, int iterations = 20000);

// Plain-text point table: one point per line, three fields, 17 significant
// digits.
void save_point_table(const std::vector<ReducedStokes>& points, const std::string& path);
std::vector<ReducedStokes> load_point_table(const std::string& path);

// Directory holding the baked point tables. POLSEC_DATA_DIR environment
// variable when set, else the build-time default.
std::string data_dir();

}  // namespace polsec
