#pragma once

#include <array>

#include <Eigen/Core>

#include "polsec/polarization.hpp"
#include "polsec/rng.hpp"

namespace polsec {

// 2x2 complex map on Jones vectors (a polarizer / channel element).
using JonesMatrix = Eigen::Matrix2cd;

// Real 4x4 map on Stokes vectors. Only a subset of real 4x4 matrices is
// physically reproducible; see check_physical.
using MuellerMatrix = Eigen::Matrix4d;

// Hermitian 4x4 equivalent of a Mueller matrix. Its eigenvalues encode
// physical realizability.
using CoherencyMatrix = Eigen::Matrix4cd;

// Pauli matrix, n in 0..3 (identity first).
const JonesMatrix& pauli(int n);

// The unitary-up-to-scale mixing matrix A relating the Jones and Stokes
// descriptions, and its exact inverse (1/2) A^H.
const Eigen::Matrix4cd& stokes_mixing_matrix();
const Eigen::Matrix4cd& stokes_mixing_matrix_inverse();

// M = A (J kron conj(J)) A^-1. The result of the complex product is real up
// to rounding; an imaginary residue above imag_tol (relative to the largest
// entry) throws std::runtime_error.
MuellerMatrix jones_to_mueller(const JonesMatrix& j, double imag_tol = 1e-9);

// Basis matrix of the coherency expansion: A (sigma_n kron conj(sigma_m)) A^-1.
// Hermitian, with coherency_basis(n, m) = conj(coherency_basis(m, n)).
Eigen::Matrix4cd coherency_basis(int n, int m);

// C = (1/4) sum_nm M_nm Gamma_nm. Hermitian by construction.
CoherencyMatrix coherency_from_mueller(const MuellerMatrix& m);

// M_nm = tr(Gamma_nm C), real for Hermitian C. Throws std::invalid_argument
// if C deviates from Hermitian symmetry by more than herm_tol (relative).
MuellerMatrix mueller_from_coherency(const CoherencyMatrix& c, double herm_tol = 1e-9);

// Physical-realizability report for a Mueller matrix.
//   eigenvalues      coherency eigenvalues, sorted descending
//   g_f, g_r         forward / reverse transmittance gains
//   eigenvalue_ok    coherency matrix positive semi-definite
//   transmittance_ok g_f <= 1 and g_r <= 1
//   invertible       |det M| above tolerance
//   pure             single positive coherency eigenvalue and
//                    (1/4) tr(M^T M) = M00^2 (deterministic, non-depolarizing)
//   golden           pure with unit transmittance (lambda_0 = M00 = 1);
//                    output stays fully polarized for fully polarized input
struct PhysicalityReport {
  std::array<double, 4> eigenvalues;
  double g_f = 0.0;
  double g_r = 0.0;
  bool eigenvalue_ok = false;
  bool transmittance_ok = false;
  bool invertible = false;
  bool pure = false;
  bool golden = false;
};

PhysicalityReport check_physical(const MuellerMatrix& m, double tol = 1e-9);

// For Jones-generated matrices, det(M) equals the square of each of four
// row expressions M_i0^2 - M_i1^2 - M_i2^2 - M_i3^2 and four column
// expressions M_0i^2 - M_1i^2 - M_2i^2 - M_3i^2. Returns the eight
// |det(M) - expr^2| residuals (rows 0..3, then columns 0..3).
std::array<double, 8> determinant_identity_residuals(const MuellerMatrix& m);

// Jones-generated Mueller matrix from a random complex Gaussian Jones matrix,
// rescaled so that max(g_f, g_r) = 1. Passes check_physical.
MuellerMatrix random_physical_mueller(RngStream& rng);

}  // namespace polsec
