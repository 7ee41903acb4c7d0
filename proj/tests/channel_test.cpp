#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "polsec/channel.hpp"
#include "test_util.hpp"

using namespace polsec;
using test::max_abs_diff;

TEST_CASE("awgn properties") {
  RngStream rng(61);
  const JonesVector e(Complex(0.3, -0.1), Complex(-0.7, 0.2));
  CHECK(awgn(e, 0.0, rng) == e);
  CHECK_THROWS_AS(awgn(e, -1.0, rng), std::invalid_argument);

  // Per-component variance of the additive noise.
  const double sigma_w2 = 0.37;
  double acc0 = 0.0, acc1 = 0.0;
  const int n = 1000000;
  RngStream noise_rng(62);
  for (int i = 0; i < n; ++i) {
    const JonesVector y = awgn(e, sigma_w2, noise_rng);
    acc0 += std::norm(y(0) - e(0));
    acc1 += std::norm(y(1) - e(1));
  }
  CHECK(acc0 / n == doctest::Approx(sigma_w2).epsilon(0.01));
  CHECK(acc1 / n == doctest::Approx(sigma_w2).epsilon(0.01));

  // A replayed stream reproduces the same noise sequence.
  RngStream a(63), b(63);
  for (int i = 0; i < 100; ++i) CHECK(awgn(e, 1.0, a) == awgn(e, 1.0, b));
}

TEST_CASE("predicted Stokes moments") {
  const StokesMoments clean = predicted_stokes_moments(2.0, 0.0);
  CHECK(clean.mean == Eigen::Vector4d(4, 0, 0, 0));
  CHECK(clean.variance(0) == 0.0);
  CHECK(clean.variance(1) == 0.0);
  CHECK(clean.variance(2) == doctest::Approx(8.0));  // residual signal spread 2*Px^2

  const StokesMoments unit = predicted_stokes_moments(1.0, 1.0);
  CHECK(unit.mean == Eigen::Vector4d(4, 0, 0, 0));
  CHECK(unit.variance == Eigen::Vector4d(6, 6, 8, 8));

  RngStream rng(64);
  for (int i = 0; i < 100; ++i) {
    const double p = rng.uniform(0.1, 3.0), s = rng.uniform(0.0, 2.0);
    const StokesMoments mom = predicted_stokes_moments(p, s);
    CHECK(mom.variance(0) == mom.variance(1));
    CHECK(mom.variance(2) == mom.variance(3));
    CHECK(mom.variance(2) - mom.variance(0) == doctest::Approx(2.0 * p * p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(predicted_stokes_moments(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("measured moments agree with the prediction") {
  const StokesMoments meas = measure_stokes_moments(1.0, 1.0, 1000000, 65);
  const StokesMoments pred = predicted_stokes_moments(1.0, 1.0);
  CHECK(meas.mean(0) == doctest::Approx(pred.mean(0)).epsilon(0.02));
  for (int k = 1; k < 4; ++k) CHECK(std::abs(meas.mean(k)) < 0.02 * pred.mean(0));
  for (int k = 0; k < 4; ++k) {
    CHECK(meas.variance(k) == doctest::Approx(pred.variance(k)).epsilon(0.02));
  }

  // Worker-count invariance, bit for bit.
  const StokesMoments serial = measure_stokes_moments(0.5, 0.25, 200000, 66, 1);
  const StokesMoments parallel = measure_stokes_moments(0.5, 0.25, 200000, 66, 4);
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.variance == parallel.variance);
}

TEST_CASE("analytic SNR transformation") {
  CHECK(stokes_snr(0.0) == Eigen::Vector4d::Zero());
  for (const double gamma : {0.01, 0.5, 3.0, 1e4}) {
    const Eigen::Vector4d snr = stokes_snr(gamma);
    CHECK(snr(1) == 0.0);
    CHECK(snr(2) == snr(3));
  }
  const Eigen::Vector4d crossover = stokes_snr(0.5);
  CHECK(crossover(0) == 0.125);
  CHECK(crossover(2) == 0.125);
  // High-SNR regime: the detected SNR of S2 halves the input SNR.
  CHECK(stokes_snr(1e7)(2) / 1e7 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(stokes_snr(-1.0), std::invalid_argument);
}

TEST_CASE("measured SNR matches the formula") {
  for (const double gamma : {0.1, 0.5, 10.0}) {
    const Eigen::Vector4d meas = measure_stokes_snr(gamma, 500000, 67);
    const Eigen::Vector4d pred = stokes_snr(gamma);
    for (const int k : {0, 2, 3}) {
      CHECK(meas(k) == doctest::Approx(pred(k)).epsilon(0.05));
    }
    CHECK(std::abs(meas(1)) < 1e-12);
  }
}

TEST_CASE("impairment Mueller matrix") {
  CHECK(max_abs_diff(impairment_mueller(0, 0, 1), MuellerMatrix::Identity()) < 1e-12);

  RngStream rng(68);
  for (int i = 0; i < 1000; ++i) {
    const Complex a = std::polar(rng.uniform(), rng.uniform(0.0, 2 * M_PI));
    const Complex b = std::polar(rng.uniform(), rng.uniform(0.0, 2 * M_PI));
    const Complex c = std::polar(rng.uniform(), rng.uniform(0.0, 2 * M_PI));
    JonesMatrix q;
    q << Complex(1, 0), a, b, c;
    CHECK(max_abs_diff(impairment_mueller(a, b, c), jones_to_mueller(q)) < 1e-9);
  }
  CHECK_THROWS_AS(impairment_mueller(Complex(1.5, 0), 0, 1), std::invalid_argument);

  // Full cross-polarization merges the branches into the slant state.
  const MuellerMatrix merge = impairment_mueller(1, 1, 1);
  for (int i = 0; i < 50; ++i) {
    const StokesVector s = unit_stokes(rng.unit_vector());
    const StokesVector out = merge * s;
    CHECK(out(0) == doctest::Approx(2 * s(0) + 2 * s(2)).epsilon(1e-12));
    CHECK(out(1) == doctest::Approx(0.0));
    CHECK(out(2) == doctest::Approx(out(0)).epsilon(1e-12));
    CHECK(out(3) == doctest::Approx(0.0));
  }

  // Imaginary unbalance swaps slant and circular components.
  const MuellerMatrix swap = impairment_mueller(0, 0, Complex(0, 1));
  for (int i = 0; i < 50; ++i) {
    const StokesVector s = unit_stokes(rng.unit_vector());
    const StokesVector out = swap * s;
    CHECK(out(2) == doctest::Approx(-s(3)).epsilon(1e-12));
    CHECK(out(3) == doctest::Approx(s(2)).epsilon(1e-12));
  }
}

TEST_CASE("global matrix block structure over a golden pattern") {
  RngStream rng(69);
  const MuellerMatrix mk = golden_mueller(random_golden(rng));
  CHECK(max_abs_diff(global_mueller(MuellerMatrix::Identity(), mk), mk) == 0.0);

  SUBCASE("cross-polarization") {
    const Complex xi(0.4, 0.25);
    const MuellerMatrix mg =
        global_mueller(impairment_mueller(xi, xi, 1), mk);
    const double n = std::norm(xi), re = xi.real(), im = xi.imag();
    CHECK(mg(0, 0) == doctest::Approx(1 + n).epsilon(1e-12));
    CHECK(mg(1, 0) == doctest::Approx(0.0));
    CHECK(mg(3, 0) == doctest::Approx(0.0));
    // The product keeps the branch coupling in the first column; the leak
    // term 2 Re{xi} appears at (2,0).
    CHECK(mg(2, 0) == doctest::Approx(2 * re).epsilon(1e-12));
    for (int j = 1; j < 4; ++j) {
      CHECK(mg(0, j) == doctest::Approx(2 * re * mk(2, j)).epsilon(1e-12));
      CHECK(mg(1, j) ==
            doctest::Approx((1 - n) * mk(1, j) - 2 * im * mk(3, j)).epsilon(1e-12));
      CHECK(mg(2, j) == doctest::Approx((1 + n) * mk(2, j)).epsilon(1e-12));
      CHECK(mg(3, j) ==
            doctest::Approx((1 - n) * mk(3, j) + 2 * im * mk(1, j)).epsilon(1e-12));
    }
  }

  SUBCASE("unbalanced") {
    const Complex xi(0.6, -0.3);
    const MuellerMatrix mg = global_mueller(impairment_mueller(0, 0, xi), mk);
    const double n = std::norm(xi), re = xi.real(), im = xi.imag();
    CHECK(mg(0, 0) == doctest::Approx(0.5 * (1 + n)).epsilon(1e-12));
    CHECK(mg(1, 0) == doctest::Approx(0.5 * (1 - n)).epsilon(1e-12));
    CHECK(mg(2, 0) == doctest::Approx(0.0));
    CHECK(mg(3, 0) == doctest::Approx(0.0));
    for (int j = 1; j < 4; ++j) {
      CHECK(mg(0, j) == doctest::Approx(0.5 * (1 - n) * mk(1, j)).epsilon(1e-12));
      CHECK(mg(1, j) == doctest::Approx(0.5 * (1 + n) * mk(1, j)).epsilon(1e-12));
      CHECK(mg(2, j) == doctest::Approx(re * mk(2, j) - im * mk(3, j)).epsilon(1e-12));
      CHECK(mg(3, j) == doctest::Approx(im * mk(2, j) + re * mk(3, j)).epsilon(1e-12));
    }
  }

  SUBCASE("real unbalance only rescales the pattern rows") {
    const double xi = 0.7;
    const MuellerMatrix mg = global_mueller(impairment_mueller(0, 0, xi), mk);
    for (int j = 1; j < 4; ++j) {
      CHECK(mg(2, j) == doctest::Approx(xi * mk(2, j)).epsilon(1e-12));
      CHECK(mg(3, j) == doctest::Approx(xi * mk(3, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("unbalance estimator") {
  RngStream rng(70);
  MuellerMatrix mk = golden_mueller(random_golden(rng));
  while (mk(1, 1) < 0.2 || std::abs(mk(1, 2)) < 0.05 || std::abs(mk(1, 3)) < 0.05) {
    mk = golden_mueller(random_golden(rng));
  }

  // Ideal case: no leakage into the first column.
  const XiEstimate ideal = estimate_xi(mk, mk);
  CHECK(ideal.xi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ideal.in_range);

  // Adversarial leakage drives the radicand negative and flags the result.
  MuellerMatrix hostile = mk;
  hostile(1, 0) = 9.0 * mk(1, 1);
  hostile(2, 0) = 9.0 * mk(1, 2);
  hostile(3, 0) = 9.0 * mk(1, 3);
  const XiEstimate flagged = estimate_xi(hostile, mk);
  CHECK_FALSE(flagged.in_range);
  CHECK(flagged.radicand < 0.0);

  // A real unbalance produces the formula value; it is a diagnostic, not an
  // inverse, so it does not generally recover xi.
  const double xi = 0.6;
  const MuellerMatrix mg = global_mueller(impairment_mueller(0, 0, xi), mk);
  const XiEstimate est = estimate_xi(mg, mk);
  const double expected = std::sqrt(1.0 - 0.5 * (1.0 - xi * xi) / (3.0 * mk(1, 1)));
  CHECK(est.xi == doctest::Approx(expected).epsilon(1e-9));

  CHECK_THROWS_AS(estimate_xi(mk, MuellerMatrix::Identity()), std::invalid_argument);
}

TEST_CASE("channel configuration pins the SNR convention") {
  ChannelConfig cfg;
  cfg.snr_db = 0.0;
  CHECK(cfg.noise_variance() == doctest::Approx(0.5).epsilon(1e-12));
  cfg.snr_db = 10.0;
  CHECK(cfg.noise_variance() == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("run_trial end to end") {
  RngStream rng(71);
  const SphereConstellation c = build_constellation(8);
  std::vector<std::uint8_t> bits(48);
  for (auto& b : bits) b = rng.bit() ? 1 : 0;

  ChannelConfig quiet;
  quiet.snr_db = 120.0;  // effectively noiseless
  for (int rep = 0; rep < 3; ++rep) {
    SecretPattern pattern;
    if (rep == 0) pattern = random_golden(rng);
    else if (rep == 1) pattern = random_rotation(rng, 2.1);
    else pattern = random_opposite(rng);
    const CipherContext ctx = CipherContext::make(pattern, c);
    RngStream trial_rng(100 + rep);
    const TrialResult res = run_trial(ctx, quiet, bits, trial_rng);
    CHECK(res.legit_bits == bits);
    CHECK(res.symbols == bits.size() / 3);
  }

  // Identity pattern: there is nothing for the eavesdropper to miss.
  const CipherContext none = CipherContext::make(RotationPattern{0, 0, 0}, c);
  ChannelConfig noisy;
  noisy.snr_db = 8.0;
  RngStream trial_rng(200);
  const TrialResult res = run_trial(none, noisy, bits, trial_rng);
  CHECK(res.eve_bits == res.legit_bits);
  CHECK(res.eve_displacement == res.legit_displacement);
}
