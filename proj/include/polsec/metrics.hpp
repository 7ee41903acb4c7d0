#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "polsec/constellation.hpp"
#include "polsec/mueller.hpp"

namespace polsec {

// Amount of transformation: the surface integral over the unit Poincare
// sphere of the squared displacement between plain and ciphered Stokes
// vectors, with the unnormalized measure (total mass 4*pi). Closed form
// 4*pi*(D00 + (D11+D22+D33)/3) with D = (M-I)^T (M-I). Zero for the
// identity; 32*pi/3 for every golden matrix.
double amount_of_transformation(const MuellerMatrix& m);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Independent Monte-Carlo oracle for amount_of_transformation: mean of
// ||(M-I)(1,s)||^2 over uniform sphere directions s, scaled by 4*pi.
// Sharded with per-shard streams derived from (seed, shard), so the estimate
// is bit-identical for any worker count.
McEstimate amount_of_transformation_mc(const MuellerMatrix& m, std::uint64_t samples,
                                       std::uint64_t seed, int workers = 1);

// (4*pi/3) ||M-I||_F^2 and 8*pi ||M-I||_F^2; the closed form always lies
// between them, and the lower bound is attained exactly when D00 = 0.
std::pair<double, double> transformation_bounds(const MuellerMatrix& m);

// Constellation-weighted mean squared displacement sum_n S_n^T D S_n P(S_n).
// probs defaults to equiprobable and must sum to 1 within 1e-12.
double average_transformation(const MuellerMatrix& m, const SphereConstellation& c,
                              const std::vector<double>* probs = nullptr);

// All strength figures for one matrix in a single report.
struct TransformationReport {
  double q_closed = 0.0;
  double q_lower = 0.0;
  double q_upper = 0.0;
  std::optional<McEstimate> q_mc;
  std::optional<double> p_avg;
};

TransformationReport transformation_report(const MuellerMatrix& m,
                                           const SphereConstellation* c = nullptr,
                                           std::uint64_t mc_samples = 0, std::uint64_t seed = 0,
                                           int workers = 1);

}  // namespace polsec
