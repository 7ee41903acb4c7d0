#include "polsec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "polsec/parallel.hpp"

namespace polsec {

namespace {

constexpr std::uint64_t kMomentShardSize = 1 << 14;

void check_magnitude(const Complex& z, const char* name) {
  if (std::norm(z) > 1.0 + 1e-12) {
    throw std::invalid_argument(std::string("impairment: |") + name + "|^2 must not exceed 1");
  }
}

// One symbol of the equal-power independent-phase branch model.
JonesVector branch_model_symbol(double p_x, RngStream& rng) {
  const double amp = std::sqrt(p_x);
  return JonesVector(amp * std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI)),
                     amp * std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI)));
}

}  // namespace

Impairment Impairment::cross_polarization(Complex xi) {
  check_magnitude(xi, "xi");
  return {Kind::CrossPolarization, xi, xi, Complex(1.0, 0.0)};
}

Impairment Impairment::unbalanced(Complex xi) {
  check_magnitude(xi, "xi");
  return {Kind::Unbalanced, Complex(0.0, 0.0), Complex(0.0, 0.0), xi};
}

Impairment Impairment::generic(Complex a, Complex b, Complex c) {
  check_magnitude(a, "a");
  check_magnitude(b, "b");
  check_magnitude(c, "c");
  return {Kind::Generic, a, b, c};
}

JonesMatrix Impairment::jones() const {
  JonesMatrix q;
  q << Complex(1.0, 0.0), a, b, c;
  return q;
}

double ChannelConfig::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

double ChannelConfig::noise_variance() const {
  const double gamma = snr_linear();
  if (!(gamma > 0.0)) throw std::invalid_argument("ChannelConfig: SNR must be positive");
  return kSymbolBranchPower / gamma;
}

JonesVector awgn(const JonesVector& e, double sigma_w2, RngStream& rng) {
  if (sigma_w2 < 0.0) throw std::invalid_argument("awgn: negative noise variance");
  if (sigma_w2 == 0.0) return e;
  return e + JonesVector(rng.complex_gaussian(sigma_w2), rng.complex_gaussian(sigma_w2));
}

StokesMoments predicted_stokes_moments(double p_x, double sigma_w2) {
  if (p_x < 0.0 || sigma_w2 < 0.0) {
    throw std::invalid_argument("predicted_stokes_moments: negative power");
  }
  StokesMoments mom;
  mom.mean = Eigen::Vector4d(2.0 * (p_x + sigma_w2), 0.0, 0.0, 0.0);
  const double additive = 4.0 * p_x * sigma_w2 + 2.0 * sigma_w2 * sigma_w2;
  const double squared = 2.0 * (p_x + sigma_w2) * (p_x + sigma_w2);
  mom.variance = Eigen::Vector4d(additive, additive, squared, squared);
  return mom;
}

StokesMoments measure_stokes_moments(double p_x, double sigma_w2, std::uint64_t n,
                                     std::uint64_t seed, int workers) {
  if (n == 0) throw std::invalid_argument("measure_stokes_moments: need samples");
  const int shards = shard_count(n, kMomentShardSize);
  std::vector<Eigen::Matrix<double, 8, 1>> partial(
      static_cast<std::size_t>(shards), Eigen::Matrix<double, 8, 1>::Zero());

  run_shards(shards, workers, [&](int s) {
    RngStream rng = RngStream::derive(seed, static_cast<std::uint64_t>(s));
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * kMomentShardSize;
    const std::uint64_t end = std::min(n, begin + kMomentShardSize);
    Eigen::Matrix<double, 8, 1> acc = Eigen::Matrix<double, 8, 1>::Zero();
    for (std::uint64_t i = begin; i < end; ++i) {
      const JonesVector y = awgn(branch_model_symbol(p_x, rng), sigma_w2, rng);
      const StokesVector sv = jones_to_stokes(y);
      for (int k = 0; k < 4; ++k) {
        acc(k) += sv(k);
        acc(4 + k) += sv(k) * sv(k);
      }
    }
    partial[static_cast<std::size_t>(s)] = acc;
  });

  Eigen::Matrix<double, 8, 1> total = Eigen::Matrix<double, 8, 1>::Zero();
  for (const auto& p : partial) total += p;

  StokesMoments mom;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int k = 0; k < 4; ++k) {
    mom.mean(k) = total(k) * inv_n;
    mom.variance(k) = std::max(0.0, total(4 + k) * inv_n - mom.mean(k) * mom.mean(k));
  }
  return mom;
}

Eigen::Vector4d stokes_snr(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("stokes_snr: gamma must be >= 0");
  if (gamma == 0.0) return Eigen::Vector4d::Zero();
  const double s0 = gamma / (1.0 + 1.5 / gamma);
  const double s23 = gamma / (2.0 + 1.0 / gamma);
  return Eigen::Vector4d(s0, 0.0, s23, s23);
}

Eigen::Vector4d measure_stokes_snr(double gamma, std::uint64_t n, std::uint64_t seed, int workers) {
  if (!(gamma > 0.0)) throw std::invalid_argument("measure_stokes_snr: gamma must be positive");
  if (n == 0) throw std::invalid_argument("measure_stokes_snr: need samples");
  const double p_x = kSymbolBranchPower;
  const double sigma_w2 = p_x / gamma;

  const int shards = shard_count(n, kMomentShardSize);
  std::vector<Eigen::Matrix<double, 8, 1>> partial(
      static_cast<std::size_t>(shards), Eigen::Matrix<double, 8, 1>::Zero());

  run_shards(shards, workers, [&](int s) {
    RngStream rng = RngStream::derive(seed, static_cast<std::uint64_t>(s));
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * kMomentShardSize;
    const std::uint64_t end = std::min(n, begin + kMomentShardSize);
    Eigen::Matrix<double, 8, 1> acc = Eigen::Matrix<double, 8, 1>::Zero();
    for (std::uint64_t i = begin; i < end; ++i) {
      const JonesVector x = branch_model_symbol(p_x, rng);
      const StokesVector clean = jones_to_stokes(x);
      const StokesVector noisy = jones_to_stokes(awgn(x, sigma_w2, rng));
      for (int k = 0; k < 4; ++k) {
        acc(k) += clean(k) * clean(k);
        const double distortion = noisy(k) - clean(k);
        acc(4 + k) += distortion * distortion;
      }
    }
    partial[static_cast<std::size_t>(s)] = acc;
  });

  Eigen::Matrix<double, 8, 1> total = Eigen::Matrix<double, 8, 1>::Zero();
  for (const auto& p : partial) total += p;

  Eigen::Vector4d snr;
  for (int k = 0; k < 4; ++k) {
    snr(k) = total(4 + k) > 0.0 ? total(k) / total(4 + k) : 0.0;
  }
  return snr;
}

MuellerMatrix impairment_mueller(Complex a, Complex b, Complex c) {
  check_magnitude(a, "a");
  check_magnitude(b, "b");
  check_magnitude(c, "c");
  const double na = std::norm(a), nb = std::norm(b), nc = std::norm(c);
  const Complex bc = b * std::conj(c);
  const Complex ac = a * std::conj(c);
  const Complex ab = a * std::conj(b);

  MuellerMatrix m;
  m << 0.5 * (1.0 + na + nb + nc), 0.5 * (1.0 + nb - na - nc), (a + bc).real(), -(a - bc).imag(),
      0.5 * (1.0 + na - nb - nc), 0.5 * (1.0 + nc - na - nb), (a - bc).real(), -(a + bc).imag(),
      (b + ac).real(), (b - ac).real(), (c + ab).real(), -(c + ab).imag(),
      (b - ac).imag(), (b + ac).imag(), (c - ab).imag(), (c - ab).real();

  JonesMatrix q;
  q << Complex(1.0, 0.0), a, b, c;
  const MuellerMatrix via_jones = jones_to_mueller(q);
  if ((m - via_jones).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::runtime_error("impairment_mueller: closed form disagrees with the Jones route");
  }
  return m;
}

MuellerMatrix global_mueller(const MuellerMatrix& mq, const MuellerMatrix& mk) {
  if (!mq.allFinite() || !mk.allFinite()) {
    throw std::invalid_argument("global_mueller: non-finite entry");
  }
  return mq * mk;
}

XiEstimate estimate_xi(const MuellerMatrix& mg, const MuellerMatrix& mk) {
  for (int j = 1; j < 4; ++j) {
    if (mk(1, j) == 0.0) {
      throw std::invalid_argument("estimate_xi: pattern entries M11, M12, M13 must be nonzero");
    }
  }
  XiEstimate est;
  est.radicand =
      1.0 - (mg(1, 0) / mk(1, 1) + mg(2, 0) / mk(1, 2) + mg(3, 0) / mk(1, 3)) / 3.0;
  est.in_range = est.radicand >= 0.0 && est.radicand <= 1.0;
  est.xi = std::sqrt(std::clamp(est.radicand, 0.0, 1.0));
  return est;
}

TrialResult run_trial(const CipherContext& ctx, const ChannelConfig& cfg,
                      std::span<const std::uint8_t> bits, RngStream& rng) {
  const SphereConstellation& constellation = *ctx.constellation;
  const double sigma_w2 = cfg.noise_variance();
  const JonesMatrix q =
      cfg.impairment ? cfg.impairment->jones() : JonesMatrix(JonesMatrix::Identity());

  std::vector<JonesVector> tx = encrypt(ctx, bits);
  std::vector<JonesVector> rx;
  rx.reserve(tx.size());
  for (const JonesVector& e : tx) {
    rx.push_back(awgn(cfg.channel * (q * e), sigma_w2, rng));
  }

  TrialResult result;
  result.symbols = rx.size();
  result.legit_bits = decrypt(ctx, rx, cfg.channel);
  result.eve_bits = decrypt_without_pattern(constellation, rx, cfg.channel);

  // Reduced-Stokes displacement of each receiver's symbol estimate from the
  // transmitted point, before the demap decision.
  const JonesMatrix equalizer = cfg.channel.inverse();
  const int bps = constellation.bits_per_symbol;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const StokesVector plain =
        map_bits(constellation, bits.subspan(k * static_cast<std::size_t>(bps),
                                             static_cast<std::size_t>(bps)));
    const StokesVector detected = jones_to_stokes(equalizer * rx[k]);
    const StokesVector deobfuscated = ctx.mueller_inverse * detected;
    if (deobfuscated(0) > 0.0) {
      result.legit_displacement +=
          (reduced(deobfuscated) / deobfuscated(0) - reduced(plain)).squaredNorm();
    }
    if (detected(0) > 0.0) {
      result.eve_displacement += (reduced(detected) / detected(0) - reduced(plain)).squaredNorm();
    }
  }
  return result;
}

}  // namespace polsec
