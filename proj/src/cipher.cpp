#include "polsec/cipher.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace polsec {

namespace {

Eigen::Vector3d rotation_axis(const RotationPattern& p) {
  return {std::sin(p.alpha) * std::cos(p.beta), std::sin(p.alpha) * std::sin(p.beta),
          std::cos(p.alpha)};
}

Eigen::Matrix3d cross_product_matrix(const Eigen::Vector3d& n) {
  Eigen::Matrix3d m;
  m << 0, -n.z(), n.y(),
       n.z(), 0, -n.x(),
       -n.y(), n.x(), 0;
  return m;
}

std::vector<StokesVector> stokes_of_received(std::span<const JonesVector> received,
                                             const JonesMatrix& channel) {
  if (std::abs(channel.determinant()) < 1e-12) {
    throw std::invalid_argument("decrypt: channel matrix is singular");
  }
  const JonesMatrix equalizer = channel.inverse();
  std::vector<StokesVector> out;
  out.reserve(received.size());
  for (const JonesVector& y : received) {
    out.push_back(jones_to_stokes(equalizer * y));
  }
  return out;
}

void append_bits(std::vector<std::uint8_t>& bits, const SphereConstellation& c, int label) {
  for (int i = 0; i < c.bits_per_symbol; ++i) {
    bits.push_back(static_cast<std::uint8_t>((label >> (c.bits_per_symbol - 1 - i)) & 1));
  }
}

double parse_real(const std::string& field) {
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw std::invalid_argument("parse_pattern: bad numeric field");
  return v;
}

}  // namespace

MuellerMatrix golden_mueller(const GoldenPattern& p) {
  const double norm = std::sqrt(p.k1 * p.k1 + p.k2 * p.k2 + p.k3 * p.k3);
  if (norm == 0.0) {
    throw std::invalid_argument("golden_mueller: direction (k1,k2,k3) must be nonzero");
  }
  const Complex phase = std::polar(1.0, p.k0);
  Eigen::Vector4cd c;
  c << 0.0, p.k1 / norm * phase, p.k2 / norm * phase, p.k3 / norm * phase;
  const CoherencyMatrix coh = c * c.adjoint();
  return mueller_from_coherency(coh);
}

JonesMatrix golden_jones(const GoldenPattern& p) {
  const double norm = std::sqrt(p.k1 * p.k1 + p.k2 * p.k2 + p.k3 * p.k3);
  if (norm == 0.0) {
    throw std::invalid_argument("golden_jones: direction (k1,k2,k3) must be nonzero");
  }
  return (p.k1 * pauli(1) + p.k2 * pauli(2) + p.k3 * pauli(3)) / norm;
}

MuellerMatrix rotation_mueller(const RotationPattern& p) {
  if (!(p.alpha >= 0.0 && p.alpha < M_PI) || !(p.beta >= 0.0 && p.beta < 2.0 * M_PI) ||
      !(p.theta >= 0.0 && p.theta < 2.0 * M_PI)) {
    throw std::invalid_argument("rotation_mueller: angle out of range");
  }
  const Eigen::Matrix3d n = cross_product_matrix(rotation_axis(p));
  const Eigen::Matrix3d r =
      Eigen::Matrix3d::Identity() + std::sin(p.theta) * n + (1.0 - std::cos(p.theta)) * n * n;
  MuellerMatrix m = MuellerMatrix::Identity();
  m.block<3, 3>(1, 1) = r;
  return m;
}

MuellerMatrix opposite_mueller(const OppositePattern& p) {
  MuellerMatrix m = MuellerMatrix::Identity();
  switch (p.variant) {
    case 0:
      m(2, 2) = m(3, 3) = -1.0;
      break;
    case 1:
      m(1, 1) = m(3, 3) = -1.0;
      break;
    case 2:
      m(1, 1) = m(2, 2) = -1.0;
      break;
    default:
      throw std::invalid_argument("opposite_mueller: variant must be 0, 1 or 2");
  }
  return m;
}

MuellerMatrix pattern_mueller(const SecretPattern& p) {
  return std::visit(
      [](const auto& v) -> MuellerMatrix {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GoldenPattern>) {
          return golden_mueller(v);
        } else if constexpr (std::is_same_v<T, RotationPattern>) {
          return rotation_mueller(v);
        } else {
          return opposite_mueller(v);
        }
      },
      p);
}

GoldenPattern random_golden(RngStream& rng) {
  const Eigen::Vector3d dir = rng.unit_vector();
  return {rng.uniform(0.0, 2.0 * M_PI), dir.x(), dir.y(), dir.z()};
}

RotationPattern random_rotation(RngStream& rng, double theta) {
  return {rng.uniform(0.0, M_PI), rng.uniform(0.0, 2.0 * M_PI), theta};
}

RotationPattern random_rotation(RngStream& rng) {
  RotationPattern p = random_rotation(rng, 0.0);
  p.theta = rng.uniform(0.5 * M_PI, 1.5 * M_PI);
  return p;
}

OppositePattern random_opposite(RngStream& rng) {
  return {static_cast<int>(rng.uniform_index(3))};
}

std::string format_pattern(const SecretPattern& p) {
  char buf[256];
  if (const auto* g = std::get_if<GoldenPattern>(&p)) {
    std::snprintf(buf, sizeof(buf), "golden;%.17g;%.17g;%.17g;%.17g", g->k0, g->k1, g->k2, g->k3);
  } else if (const auto* r = std::get_if<RotationPattern>(&p)) {
    std::snprintf(buf, sizeof(buf), "rotation;%.17g;%.17g;%.17g", r->alpha, r->beta, r->theta);
  } else {
    std::snprintf(buf, sizeof(buf), "opposite;%d", std::get<OppositePattern>(p).variant);
  }
  return buf;
}

SecretPattern parse_pattern(const std::string& record) {
  std::vector<std::string> fields;
  std::stringstream ss(record);
  std::string field;
  while (std::getline(ss, field, ';')) fields.push_back(field);
  if (fields.empty()) throw std::invalid_argument("parse_pattern: empty record");
  if (fields[0] == "golden" && fields.size() == 5) {
    return GoldenPattern{parse_real(fields[1]), parse_real(fields[2]), parse_real(fields[3]),
                         parse_real(fields[4])};
  }
  if (fields[0] == "rotation" && fields.size() == 4) {
    return RotationPattern{parse_real(fields[1]), parse_real(fields[2]), parse_real(fields[3])};
  }
  if (fields[0] == "opposite" && fields.size() == 2) {
    return OppositePattern{static_cast<int>(parse_real(fields[1]))};
  }
  throw std::invalid_argument("parse_pattern: unrecognized record '" + record + "'");
}

CipherContext CipherContext::make(SecretPattern pattern, const SphereConstellation& constellation) {
  CipherContext ctx;
  ctx.pattern = std::move(pattern);
  ctx.mueller = pattern_mueller(ctx.pattern);
  const PhysicalityReport rep = check_physical(ctx.mueller);
  if (!rep.eigenvalue_ok || !rep.transmittance_ok || !rep.invertible) {
    throw std::invalid_argument("CipherContext: pattern matrix is not physical");
  }
  ctx.mueller_inverse = ctx.mueller.inverse();
  if ((ctx.mueller * ctx.mueller_inverse - MuellerMatrix::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::runtime_error("CipherContext: inverse check failed");
  }
  ctx.constellation = &constellation;
  return ctx;
}

std::vector<JonesVector> encrypt(const CipherContext& ctx, std::span<const std::uint8_t> bits) {
  const SphereConstellation& c = *ctx.constellation;
  if (bits.size() % static_cast<std::size_t>(c.bits_per_symbol) != 0) {
    throw std::invalid_argument("encrypt: block length must be a multiple of bits per symbol");
  }
  const std::size_t symbols = bits.size() / static_cast<std::size_t>(c.bits_per_symbol);
  std::vector<JonesVector> out;
  out.reserve(symbols);
  for (std::size_t k = 0; k < symbols; ++k) {
    const StokesVector plain =
        map_bits(c, bits.subspan(k * static_cast<std::size_t>(c.bits_per_symbol),
                                 static_cast<std::size_t>(c.bits_per_symbol)));
    const StokesVector ciphered = ctx.mueller * plain;
    if (!is_fully_polarized(ciphered, 1e-6)) {
      throw std::runtime_error("encrypt: ciphered state is depolarized");
    }
    out.push_back(stokes_to_jones(ciphered));
  }
  return out;
}

std::vector<std::uint8_t> decrypt(const CipherContext& ctx, std::span<const JonesVector> received,
                                  const JonesMatrix& channel) {
  const SphereConstellation& c = *ctx.constellation;
  std::vector<std::uint8_t> bits;
  bits.reserve(received.size() * static_cast<std::size_t>(c.bits_per_symbol));
  for (const StokesVector& s : stokes_of_received(received, channel)) {
    append_bits(bits, c, demap_label(c, ctx.mueller_inverse * s));
  }
  return bits;
}

std::vector<std::uint8_t> decrypt_without_pattern(const SphereConstellation& constellation,
                                                  std::span<const JonesVector> received,
                                                  const JonesMatrix& channel) {
  std::vector<std::uint8_t> bits;
  bits.reserve(received.size() * static_cast<std::size_t>(constellation.bits_per_symbol));
  for (const StokesVector& s : stokes_of_received(received, channel)) {
    append_bits(bits, constellation, demap_label(constellation, s));
  }
  return bits;
}

}  // namespace polsec
