#include "polsec/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace polsec {

namespace {

std::vector<ReducedStokes> poles() {
  return {ReducedStokes(0, 0, 1), ReducedStokes(0, 0, -1)};
}

std::vector<ReducedStokes> tetrahedron() {
  const double k = 1.0 / std::sqrt(3.0);
  return {ReducedStokes(k, k, k), ReducedStokes(k, -k, -k), ReducedStokes(-k, k, -k),
          ReducedStokes(-k, -k, k)};
}

// Square antiprism with the ring radius chosen so that in-ring and
// cross-ring nearest-neighbor distances coincide: r^2 = 4/(4+sqrt(2)).
std::vector<ReducedStokes> square_antiprism() {
  const double r = std::sqrt(4.0 / (4.0 + std::sqrt(2.0)));
  const double h = std::sqrt(1.0 - r * r);
  std::vector<ReducedStokes> pts;
  pts.reserve(8);
  for (int k = 0; k < 4; ++k) {
    const double phi = 0.5 * M_PI * k;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), h);
  }
  for (int k = 0; k < 4; ++k) {
    const double phi = 0.5 * M_PI * k + 0.25 * M_PI;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), -h);
  }
  return pts;
}

// Greedy nearest-neighbor walk over the points starting at index 0.
std::vector<int> nearest_neighbor_walk(const std::vector<ReducedStokes>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  order.reserve(static_cast<std::size_t>(n));
  int current = 0;
  order.push_back(0);
  used[0] = true;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double d2 = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(current)]).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    order.push_back(best);
    used[static_cast<std::size_t>(best)] = true;
    current = best;
  }
  return order;
}

SphereConstellation finish(int m, std::vector<ReducedStokes> pts) {
  SphereConstellation c;
  c.size = m;
  c.bits_per_symbol = static_cast<int>(std::round(std::log2(static_cast<double>(m))));
  c.points = std::move(pts);
  c.min_angle = min_pairwise_angle(c.points);
  c.label_to_point.assign(static_cast<std::size_t>(m), 0);
  c.point_to_label.assign(static_cast<std::size_t>(m), 0);
  const std::vector<int> walk = nearest_neighbor_walk(c.points);
  for (int k = 0; k < m; ++k) {
    const int gray = k ^ (k >> 1);
    c.label_to_point[static_cast<std::size_t>(gray)] = walk[static_cast<std::size_t>(k)];
    c.point_to_label[static_cast<std::size_t>(walk[static_cast<std::size_t>(k)])] = gray;
  }
  return c;
}

std::vector<ReducedStokes> baked_points(int m) {
  const std::string path = data_dir() + "/constellations/m" + std::to_string(m) + ".txt";
  std::vector<ReducedStokes> pts = load_point_table(path);
  if (static_cast<int>(pts.size()) != m) {
    throw std::runtime_error("constellation table " + path + " has wrong point count");
  }
  return pts;
}

}  // namespace

SphereConstellation build_constellation(int m) {
  switch (m) {
    case 2:
      return finish(m, poles());
    case 4:
      return finish(m, tetrahedron());
    case 8:
      return finish(m, square_antiprism());
    case 16:
    case 32:
      return finish(m, baked_points(m));
    default:
      throw std::invalid_argument("build_constellation: size must be one of 2, 4, 8, 16, 32");
  }
}

double min_pairwise_angle(const std::vector<ReducedStokes>& points) {
  double min_angle = M_PI;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dot = std::clamp(points[i].dot(points[j]), -1.0, 1.0);
      min_angle = std::min(min_angle, std::acos(dot));
    }
  }
  return min_angle;
}

StokesVector map_bits(const SphereConstellation& c, std::span<const std::uint8_t> bits) {
  if (static_cast<int>(bits.size()) != c.bits_per_symbol) {
    throw std::invalid_argument("map_bits: block length does not match bits per symbol");
  }
  int label = 0;
  for (const std::uint8_t b : bits) label = (label << 1) | (b & 1);
  return unit_stokes(c.points[static_cast<std::size_t>(c.label_to_point[static_cast<std::size_t>(label)])]);
}

int demap_label(const SphereConstellation& c, const StokesVector& s) {
  if (!(s(0) > 0.0)) throw std::invalid_argument("demap: S0 must be positive");
  const ReducedStokes r = reduced(s) / s(0);
  int best = 0;
  double best_d2 = (c.points[0] - r).squaredNorm();
  for (int i = 1; i < c.size; ++i) {
    const double d2 = (c.points[static_cast<std::size_t>(i)] - r).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return c.point_to_label[static_cast<std::size_t>(best)];
}

std::vector<std::uint8_t> demap(const SphereConstellation& c, const StokesVector& s) {
  const int label = demap_label(c, s);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(c.bits_per_symbol));
  for (int i = 0; i < c.bits_per_symbol; ++i) {
    bits[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((label >> (c.bits_per_symbol - 1 - i)) & 1);
  }
  return bits;
}

std::vector<ReducedStokes> repulsion_points(int m, std::uint64_t seed, int iterations) {
  if (m < 2) throw std::invalid_argument("repulsion_points: need at least two points");
  RngStream rng(seed);
  std::vector<ReducedStokes> pts(static_cast<std::size_t>(m));
  for (auto& p : pts) p = rng.unit_vector();

  // Inverse-power repulsion with the exponent ramped up over the run. Large
  // exponents concentrate the force on the closest pairs, steering the
  // equilibrium toward the max-min configuration.
  std::vector<ReducedStokes> force(static_cast<std::size_t>(m));
  for (int it = 0; it < iterations; ++it) {
    const double progress = static_cast<double>(it) / iterations;
    const double step = 0.1 / (1.0 + 12.0 * progress);
    const double exponent = 3.0 + 21.0 * progress;
    for (auto& f : force) f.setZero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        ReducedStokes d = pts[i] - pts[j];
        const double dist = std::max(d.norm(), 1e-9);
        const ReducedStokes push = d / std::pow(dist, exponent);
        force[i] += push;
        force[j] -= push;
      }
    }
    double max_force = 0.0;
    for (const auto& f : force) max_force = std::max(max_force, f.norm());
    if (max_force == 0.0) break;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      pts[i] = (pts[i] + step / max_force * force[i]).normalized();
    }
  }

  // Max-min polish: act only on pairs within a slack of the current minimum
  // distance, shrinking step and slack together, and keep the best
  // configuration seen.
  std::vector<ReducedStokes> best = pts;
  double best_min = min_pairwise_angle(pts);
  for (int it = 0; it < iterations; ++it) {
    const double t = static_cast<double>(it) / iterations;
    const double step = 0.02 * (1.0 - t) + 0.0005;
    const double slack = 1.10 - 0.08 * t;
    double dmin = 4.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        dmin = std::min(dmin, (pts[i] - pts[j]).norm());
      }
    }
    for (auto& f : force) f.setZero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const ReducedStokes d = pts[i] - pts[j];
        const double dist = d.norm();
        if (dist < dmin * slack) {
          const ReducedStokes push = d / dist * (dmin * slack - dist);
          force[i] += push;
          force[j] -= push;
        }
      }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      pts[i] = (pts[i] + step / (0.1 * dmin) * force[i]).normalized();
    }
    const double angle = min_pairwise_angle(pts);
    if (angle > best_min) {
      best_min = angle;
      best = pts;
    }
  }
  return best;
}

void save_point_table(const std::vector<ReducedStokes>& points, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_point_table: cannot open " + path);
  char line[128];
  for (const auto& p : points) {
    std::snprintf(line, sizeof(line), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << line;
  }
}

std::vector<ReducedStokes> load_point_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_point_table: cannot open " + path);
  std::vector<ReducedStokes> pts;
  double x, y, z;
  while (in >> x >> y >> z) pts.emplace_back(x, y, z);
  return pts;
}

std::string data_dir() {
  if (const char* env = std::getenv("POLSEC_DATA_DIR")) return env;
#ifdef POLSEC_DATA_DIR
  return POLSEC_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace polsec
