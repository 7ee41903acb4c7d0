#include "polsec/mueller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace polsec {

namespace {

constexpr Complex kJ{0.0, 1.0};

Eigen::Matrix4cd make_mixing_matrix() {
  Eigen::Matrix4cd a;
  a << 1, 0, 0, 1,
       1, 0, 0, -1,
       0, 1, 1, 0,
       0, kJ, -kJ, 0;
  return a;
}

// Complex-valued Mueller product before the real projection.
Eigen::Matrix4cd mueller_product(const JonesMatrix& j) {
  const Eigen::Matrix4cd kron = Eigen::kroneckerProduct(j, j.conjugate());
  return stokes_mixing_matrix() * kron * stokes_mixing_matrix_inverse();
}

MuellerMatrix real_part_checked(const Eigen::Matrix4cd& mc, double imag_tol, const char* what) {
  const double scale = std::max(1.0, mc.cwiseAbs().maxCoeff());
  if (mc.imag().cwiseAbs().maxCoeff() > imag_tol * scale) {
    throw std::runtime_error(std::string(what) + ": imaginary residue above tolerance");
  }
  return mc.real();
}

}  // namespace

const JonesMatrix& pauli(int n) {
  static const std::array<JonesMatrix, 4> sigma = [] {
    std::array<JonesMatrix, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 1, 0, 0, -1;
    s[2] << 0, 1, 1, 0;
    s[3] << 0, -kJ, kJ, 0;
    return s;
  }();
  if (n < 0 || n > 3) throw std::invalid_argument("pauli: index out of range");
  return sigma[static_cast<std::size_t>(n)];
}

const Eigen::Matrix4cd& stokes_mixing_matrix() {
  static const Eigen::Matrix4cd a = make_mixing_matrix();
  return a;
}

const Eigen::Matrix4cd& stokes_mixing_matrix_inverse() {
  static const Eigen::Matrix4cd inv = 0.5 * make_mixing_matrix().adjoint();
  return inv;
}

MuellerMatrix jones_to_mueller(const JonesMatrix& j, double imag_tol) {
  if (!j.allFinite()) throw std::invalid_argument("jones_to_mueller: non-finite entry");
  return real_part_checked(mueller_product(j), imag_tol, "jones_to_mueller");
}

Eigen::Matrix4cd coherency_basis(int n, int m) {
  if (n < 0 || n > 3 || m < 0 || m > 3) {
    throw std::invalid_argument("coherency_basis: index out of range");
  }
  static const std::array<Eigen::Matrix4cd, 16> table = [] {
    std::array<Eigen::Matrix4cd, 16> t;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const Eigen::Matrix4cd kron = Eigen::kroneckerProduct(pauli(a), pauli(b).conjugate());
        t[static_cast<std::size_t>(4 * a + b)] =
            stokes_mixing_matrix() * kron * stokes_mixing_matrix_inverse();
      }
    }
    return t;
  }();
  return table[static_cast<std::size_t>(4 * n + m)];
}

CoherencyMatrix coherency_from_mueller(const MuellerMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("coherency_from_mueller: non-finite entry");
  CoherencyMatrix c = CoherencyMatrix::Zero();
  for (int n = 0; n < 4; ++n) {
    for (int k = 0; k < 4; ++k) {
      c += m(n, k) * coherency_basis(n, k);
    }
  }
  return 0.25 * c;
}

MuellerMatrix mueller_from_coherency(const CoherencyMatrix& c, double herm_tol) {
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale) {
    throw std::invalid_argument("mueller_from_coherency: input is not Hermitian");
  }
  Eigen::Matrix4cd mc;
  for (int n = 0; n < 4; ++n) {
    for (int k = 0; k < 4; ++k) {
      mc(n, k) = (coherency_basis(n, k) * c).trace();
    }
  }
  return real_part_checked(mc, 1e-9, "mueller_from_coherency");
}

PhysicalityReport check_physical(const MuellerMatrix& m, double tol) {
  PhysicalityReport rep;

  const CoherencyMatrix c = coherency_from_mueller(m);
  Eigen::SelfAdjointEigenSolver<CoherencyMatrix> solver(c);
  Eigen::Vector4d ev = solver.eigenvalues();  // ascending
  for (int i = 0; i < 4; ++i) rep.eigenvalues[static_cast<std::size_t>(i)] = ev(3 - i);

  rep.eigenvalue_ok = rep.eigenvalues[3] >= -tol;
  rep.g_f = m(0, 0) + std::sqrt(m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(0, 3) * m(0, 3));
  rep.g_r = m(0, 0) + std::sqrt(m(1, 0) * m(1, 0) + m(2, 0) * m(2, 0) + m(3, 0) * m(3, 0));
  rep.transmittance_ok = rep.g_f <= 1.0 + tol && rep.g_r <= 1.0 + tol;
  rep.invertible = std::abs(m.determinant()) > tol;

  int positive = 0;
  for (double lambda : rep.eigenvalues) {
    if (lambda > tol) ++positive;
  }
  const double frob_gap = std::abs(0.25 * (m.transpose() * m).trace() - m(0, 0) * m(0, 0));
  rep.pure = rep.eigenvalue_ok && positive == 1 && frob_gap <= tol * std::max(1.0, m(0, 0) * m(0, 0));
  rep.golden = rep.pure && std::abs(rep.eigenvalues[0] - 1.0) <= tol;
  return rep;
}

std::array<double, 8> determinant_identity_residuals(const MuellerMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("determinant_identity_residuals: non-finite entry");
  const double det = m.determinant();
  std::array<double, 8> res;
  for (int i = 0; i < 4; ++i) {
    const double row = m(i, 0) * m(i, 0) - m(i, 1) * m(i, 1) - m(i, 2) * m(i, 2) - m(i, 3) * m(i, 3);
    const double col = m(0, i) * m(0, i) - m(1, i) * m(1, i) - m(2, i) * m(2, i) - m(3, i) * m(3, i);
    res[static_cast<std::size_t>(i)] = std::abs(det - row * row);
    res[static_cast<std::size_t>(i + 4)] = std::abs(det - col * col);
  }
  return res;
}

MuellerMatrix random_physical_mueller(RngStream& rng) {
  JonesMatrix j;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      j(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  MuellerMatrix m = jones_to_mueller(j);
  const double g_f = m(0, 0) + std::sqrt(m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(0, 3) * m(0, 3));
  const double g_r = m(0, 0) + std::sqrt(m(1, 0) * m(1, 0) + m(2, 0) * m(2, 0) + m(3, 0) * m(3, 0));
  const double gain = std::max(g_f, g_r);
  if (gain <= 0.0) return random_physical_mueller(rng);  // degenerate draw, retry
  return m / gain;
}

}  // namespace polsec
