#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polsec/constellation.hpp"
#include "polsec/mueller.hpp"
#include "polsec/polarization.hpp"
#include "polsec/rng.hpp"

namespace polsec {

// Four real numbers; k0 is a phase that cancels in the construction, the
// direction (k1, k2, k3) must be nonzero.
struct GoldenPattern {
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

// Poincare-sphere rotation: axis from (alpha, beta) spherical angles, turn
// angle theta.
struct RotationPattern {
  double alpha = 0.0;  // [0, pi)
  double beta = 0.0;   // [0, 2*pi)
  double theta = 0.0;  // [0, 2*pi)
};

// Index into the three physically valid sign triples. Only three of the
// eight diagonal sign patterns pass the eigenvalue condition; the all-plus
// diagonal is the identity and performs no obfuscation.
struct OppositePattern {
  int variant = 0;  // {0, 1, 2}
};

using SecretPattern = std::variant<GoldenPattern, RotationPattern, OppositePattern>;

// Golden Mueller matrix from the pattern: c = (0, k1, k2, k3) e^{j k0}
// normalized, C = c c^H, M_nm = tr(Gamma_nm C). Unit transmittance, zero
// trace, involution. Throws std::invalid_argument when (k1,k2,k3) = 0.
MuellerMatrix golden_mueller(const GoldenPattern& p);

// The equivalent Jones matrix (k1 s1 + k2 s2 + k3 s3 normalized); its
// Mueller image equals golden_mueller(p) and the equality is kept under test.
JonesMatrix golden_jones(const GoldenPattern& p);

// block-diag(1, R) with R the axis-angle rotation
// R = I + sin(theta) N + (1 - cos(theta)) N^2, N the cross-product matrix of
// the axis. tr(M) = 2 (1 + cos(theta)).
MuellerMatrix rotation_mueller(const RotationPattern& p);

// diag(1,1,-1,-1), diag(1,-1,1,-1) or diag(1,-1,-1,1). Self-inverse.
MuellerMatrix opposite_mueller(const OppositePattern& p);

MuellerMatrix pattern_mueller(const SecretPattern& p);

// Pattern samplers used by the experiment runner. Golden draws a uniform
// direction and phase; rotation draws alpha, beta uniform over their ranges
// with theta supplied by the caller.
GoldenPattern random_golden(RngStream& rng);
RotationPattern random_rotation(RngStream& rng, double theta);
RotationPattern random_rotation(RngStream& rng);  // theta uniform in [pi/2, 3*pi/2]
OppositePattern random_opposite(RngStream& rng);

// Single-line text record "scheme;param1;..." with 17-significant-digit
// reals, for key exchange between transmitter and receiver runs.
std::string format_pattern(const SecretPattern& p);
SecretPattern parse_pattern(const std::string& record);

// Immutable per-block cipher state: the pattern, its Mueller matrix and
// inverse, and the shared constellation. Construction validates that the
// matrix is physical (eigenvalue, transmittance, invertibility) and that
// M * M^-1 = I within tolerance.
struct CipherContext {
  SecretPattern pattern;
  MuellerMatrix mueller;
  MuellerMatrix mueller_inverse;
  const SphereConstellation* constellation = nullptr;

  static CipherContext make(SecretPattern pattern, const SphereConstellation& constellation);
};

// Per symbol: map bits on the sphere, apply the pattern matrix, convert the
// ciphered Stokes vector back to the field. Block length must be a multiple
// of bits_per_symbol. Throws std::runtime_error if a ciphered state comes
// out depolarized (a non-pure matrix slipped through).
std::vector<JonesVector> encrypt(const CipherContext& ctx, std::span<const std::uint8_t> bits);

// Zero-forcing equalization with the known channel, Stokes detection,
// pattern inverse, nearest-point demapping. Throws std::invalid_argument for
// a singular channel.
std::vector<std::uint8_t> decrypt(const CipherContext& ctx, std::span<const JonesVector> received,
                                  const JonesMatrix& channel = JonesMatrix::Identity());

// Eavesdropper pipeline: same equalizer and constellation knowledge, no
// pattern inverse.
std::vector<std::uint8_t> decrypt_without_pattern(const SphereConstellation& constellation,
                                                  std::span<const JonesVector> received,
                                                  const JonesMatrix& channel = JonesMatrix::Identity());

}  // namespace polsec
