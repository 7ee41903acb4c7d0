#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polsec/cipher.hpp"
#include "polsec/mueller.hpp"
#include "polsec/polarization.hpp"
#include "polsec/rng.hpp"

namespace polsec {

// Per-branch polarization imperfection, applied in the Jones domain as
// [[1, a], [b, c]]. The Mueller-domain expressions serve as independent
// checks of the same model, not as the signal path.
struct Impairment {
  enum class Kind { CrossPolarization, Unbalanced, Generic };

  Kind kind = Kind::Generic;
  Complex a{0.0, 0.0};
  Complex b{0.0, 0.0};
  Complex c{1.0, 0.0};

  // Coupling between branches: a = b = xi, c = 1. xi = 0 is perfect
  // isolation, |xi| -> 1 merges the branches.
  static Impairment cross_polarization(Complex xi);

  // Unequal branch gain: a = b = 0, c = xi. xi = 1 is balanced, xi -> 0
  // blocks the second branch.
  static Impairment unbalanced(Complex xi);

  static Impairment generic(Complex a, Complex b, Complex c);

  JonesMatrix jones() const;
};

// Link configuration. SNR convention: gamma = P_x / sigma_w^2 with
// P_x = 1/2 the per-branch signal power of unit-energy symbols (S0 = 1) and
// sigma_w^2 the noise variance per complex component.
struct ChannelConfig {
  double snr_db = 20.0;
  JonesMatrix channel = JonesMatrix::Identity();
  std::optional<Impairment> impairment;

  double snr_linear() const;
  double noise_variance() const;  // sigma_w^2 = P_x / gamma
};

constexpr double kSymbolBranchPower = 0.5;  // P_x for S0 = 1

// Adds independent circularly-symmetric complex Gaussian noise of variance
// sigma_w2 per polarization component. Throws std::invalid_argument for
// negative variance.
JonesVector awgn(const JonesVector& e, double sigma_w2, RngStream& rng);

// First and second moments of the detected Stokes vector under the squared
// detection mechanism.
struct StokesMoments {
  Eigen::Vector4d mean;
  Eigen::Vector4d variance;
};

// mean = 2 (P_x + s2, 0, 0, 0);
// variance = (4 P_x s2 + 2 s2^2, same, 2 (P_x + s2)^2, same), s2 = sigma_w2.
StokesMoments predicted_stokes_moments(double p_x, double sigma_w2);

// Empirical moments over n noisy symbols drawn from the equal-power
// independent-phase branch model (|x1| = |x2| = sqrt(P_x), phases uniform).
// Deterministic for fixed seed, any worker count.
StokesMoments measure_stokes_moments(double p_x, double sigma_w2, std::uint64_t n,
                                     std::uint64_t seed, int workers = 1);

// SNR of each detected Stokes parameter for input SNR gamma:
// (gamma/(1 + 1.5/gamma), 0, gamma/(2 + 1/gamma), gamma/(2 + 1/gamma)).
// Returns zeros at gamma = 0.
Eigen::Vector4d stokes_snr(double gamma);

// Monte-Carlo power-ratio estimate of the same four SNRs: signal power over
// the power of everything the detector adds on top of it.
Eigen::Vector4d measure_stokes_snr(double gamma, std::uint64_t n, std::uint64_t seed,
                                   int workers = 1);

// Mueller matrix of the impairment [[1, a], [b, c]], from the closed-form
// entries; asserted against the Jones route within 1e-9. Magnitudes of a, b,
// c must not exceed 1.
MuellerMatrix impairment_mueller(Complex a, Complex b, Complex c);

// Combined matrix seen by the receiver when the impairment follows the
// pattern: M_Q * M_K.
MuellerMatrix global_mueller(const MuellerMatrix& mq, const MuellerMatrix& mk);

// Estimator sqrt(1 - (1/3)(MG10/M11 + MG20/M12 + MG30/M13)) for a real
// unbalance factor; in_range flags a radicand inside [0,1]. Throws
// std::invalid_argument when any of M11, M12, M13 is zero.
struct XiEstimate {
  double xi = 0.0;
  double radicand = 0.0;
  bool in_range = false;
};

XiEstimate estimate_xi(const MuellerMatrix& mg, const MuellerMatrix& mk);

// One transmit/receive pass over a bit block: encrypt, optional impairment,
// channel, AWGN, then decrypt twice - with the pattern inverse (legitimate)
// and without it (eavesdropper). Displacement sums are squared distances
// between the recovered reduced Stokes vectors and the transmitted points,
// before the demapping decision.
struct TrialResult {
  std::vector<std::uint8_t> legit_bits;
  std::vector<std::uint8_t> eve_bits;
  double legit_displacement = 0.0;  // sum over symbols
  double eve_displacement = 0.0;
  std::size_t symbols = 0;
};

TrialResult run_trial(const CipherContext& ctx, const ChannelConfig& cfg,
                      std::span<const std::uint8_t> bits, RngStream& rng);

}  // namespace polsec
