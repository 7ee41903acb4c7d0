#include "polsec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polsec/parallel.hpp"

namespace polsec {

namespace {

MuellerMatrix displacement_gram(const MuellerMatrix& m) {
  const MuellerMatrix d = m - MuellerMatrix::Identity();
  return d.transpose() * d;
}

constexpr std::uint64_t kMcShardSize = 4096;

}  // namespace

double amount_of_transformation(const MuellerMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("amount_of_transformation: non-finite entry");
  const MuellerMatrix d = displacement_gram(m);
  return 4.0 * M_PI * (d(0, 0) + (d(1, 1) + d(2, 2) + d(3, 3)) / 3.0);
}

McEstimate amount_of_transformation_mc(const MuellerMatrix& m, std::uint64_t samples,
                                       std::uint64_t seed, int workers) {
  if (samples < 1000) {
    throw std::invalid_argument("amount_of_transformation_mc: need at least 1000 samples");
  }
  const MuellerMatrix d = m - MuellerMatrix::Identity();
  const int shards = shard_count(samples, kMcShardSize);
  std::vector<double> sum(static_cast<std::size_t>(shards), 0.0);
  std::vector<double> sum_sq(static_cast<std::size_t>(shards), 0.0);

  run_shards(shards, workers, [&](int s) {
    RngStream rng = RngStream::derive(seed, static_cast<std::uint64_t>(s));
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * kMcShardSize;
    const std::uint64_t end = std::min(samples, begin + kMcShardSize);
    double acc = 0.0, acc_sq = 0.0;
    for (std::uint64_t i = begin; i < end; ++i) {
      const StokesVector sv = unit_stokes(rng.unit_vector());
      const double val = (d * sv).squaredNorm();
      acc += val;
      acc_sq += val * val;
    }
    sum[static_cast<std::size_t>(s)] = acc;
    sum_sq[static_cast<std::size_t>(s)] = acc_sq;
  });

  // Combine in shard order: identical bytes for any worker count.
  double total = 0.0, total_sq = 0.0;
  for (int s = 0; s < shards; ++s) {
    total += sum[static_cast<std::size_t>(s)];
    total_sq += sum_sq[static_cast<std::size_t>(s)];
  }
  const double n = static_cast<double>(samples);
  const double mean = total / n;
  const double var = std::max(0.0, total_sq / n - mean * mean);
  return {4.0 * M_PI * mean, 4.0 * M_PI * std::sqrt(var / n)};
}

std::pair<double, double> transformation_bounds(const MuellerMatrix& m) {
  const double f2 = (m - MuellerMatrix::Identity()).squaredNorm();
  return {4.0 * M_PI / 3.0 * f2, 8.0 * M_PI * f2};
}

double average_transformation(const MuellerMatrix& m, const SphereConstellation& c,
                              const std::vector<double>* probs) {
  const std::size_t n = c.points.size();
  if (probs) {
    if (probs->size() != n) {
      throw std::invalid_argument("average_transformation: distribution size mismatch");
    }
    double total = 0.0;
    for (double p : *probs) {
      if (p < 0.0) throw std::invalid_argument("average_transformation: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("average_transformation: distribution must sum to 1");
    }
  }
  const MuellerMatrix d = displacement_gram(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const StokesVector s = unit_stokes(c.points[i]);
    const double weight = probs ? (*probs)[i] : 1.0 / static_cast<double>(n);
    acc += weight * s.dot(d * s);
  }
  return acc;
}

TransformationReport transformation_report(const MuellerMatrix& m, const SphereConstellation* c,
                                           std::uint64_t mc_samples, std::uint64_t seed,
                                           int workers) {
  TransformationReport rep;
  rep.q_closed = amount_of_transformation(m);
  std::tie(rep.q_lower, rep.q_upper) = transformation_bounds(m);
  if (mc_samples > 0) rep.q_mc = amount_of_transformation_mc(m, mc_samples, seed, workers);
  if (c) rep.p_avg = average_transformation(m, *c);
  return rep;
}

}  // namespace polsec
