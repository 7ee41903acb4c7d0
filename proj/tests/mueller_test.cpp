#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "polsec/mueller.hpp"
#include "test_util.hpp"

using namespace polsec;
using test::max_abs_diff;

namespace {

JonesMatrix random_jones(RngStream& rng) {
  JonesMatrix j;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) j(r, c) = rng.complex_gaussian(1.0);
  return j;
}

}  // namespace

TEST_CASE("jones_to_mueller on reference matrices") {
  CHECK(max_abs_diff(jones_to_mueller(JonesMatrix::Identity()), MuellerMatrix::Identity()) <
        1e-15);

  MuellerMatrix flip = MuellerMatrix::Identity();
  flip(2, 2) = flip(3, 3) = -1.0;
  CHECK(max_abs_diff(jones_to_mueller(pauli(1)), flip) < 1e-15);

  JonesMatrix hadamard;
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  MuellerMatrix expect;
  expect << 1, 0, 0, 0,
            0, 0, 1, 0,
            0, 1, 0, 0,
            0, 0, 0, -1;
  CHECK(max_abs_diff(jones_to_mueller(hadamard), expect) < 1e-15);
}

TEST_CASE("commuting diagram: Mueller action equals Jones action") {
  RngStream rng(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const JonesMatrix j = random_jones(rng);
    const JonesVector e(rng.complex_gaussian(1.0), rng.complex_gaussian(1.0));
    const StokesVector via_jones = jones_to_stokes(j * e);
    const StokesVector via_mueller = jones_to_mueller(j) * jones_to_stokes(e);
    worst = std::max(worst, (via_jones - via_mueller).norm() / via_jones.norm());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("jones_to_mueller is a homomorphism") {
  RngStream rng(12);
  for (int i = 0; i < 1000; ++i) {
    const JonesMatrix j1 = random_jones(rng), j2 = random_jones(rng);
    const MuellerMatrix lhs = jones_to_mueller(j1 * j2);
    const MuellerMatrix rhs = jones_to_mueller(j1) * jones_to_mueller(j2);
    CHECK(max_abs_diff(lhs, rhs) / std::max(1.0, lhs.cwiseAbs().maxCoeff()) < 1e-9);
  }
}

TEST_CASE("coherency basis matrices") {
  CHECK(max_abs_diff(coherency_basis(0, 0), Eigen::Matrix4cd::Identity()) < 1e-15);

  // Sparsity pattern of the off-diagonal basis matrices; entries have unit
  // magnitude under the (1/2) A^H inverse normalization.
  const Eigen::Matrix4cd g01 = coherency_basis(0, 1);
  Eigen::Matrix4cd expect01 = Eigen::Matrix4cd::Zero();
  expect01(0, 1) = expect01(1, 0) = 1.0;
  expect01(2, 3) = Complex(0, 1);
  expect01(3, 2) = Complex(0, -1);
  CHECK(max_abs_diff(g01, expect01) < 1e-15);

  const Eigen::Matrix4cd g02 = coherency_basis(0, 2);
  Eigen::Matrix4cd expect02 = Eigen::Matrix4cd::Zero();
  expect02(0, 2) = expect02(2, 0) = 1.0;
  expect02(1, 3) = Complex(0, -1);
  expect02(3, 1) = Complex(0, 1);
  CHECK(max_abs_diff(g02, expect02) < 1e-15);

  // Gamma(0,3): the anti-diagonal sparsity pattern with unit-magnitude
  // entries (the printed version of this one is not Hermitian, so only the
  // pattern is pinned).
  const Eigen::Matrix4cd g03 = coherency_basis(0, 3);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double expected_mag = (r + c == 3) ? 1.0 : 0.0;
      CHECK(std::abs(g03(r, c)) == doctest::Approx(expected_mag));
    }
  }

  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      const Eigen::Matrix4cd g = coherency_basis(n, m);
      CHECK(max_abs_diff(g, coherency_basis(m, n).conjugate()) < 1e-15);
      CHECK(max_abs_diff(g, Eigen::Matrix4cd(g.adjoint())) < 1e-15);
    }
  }
  CHECK_THROWS_AS(coherency_basis(4, 0), std::invalid_argument);
}

TEST_CASE("coherency round trips") {
  const CoherencyMatrix c_id = coherency_from_mueller(MuellerMatrix::Identity());
  Eigen::Matrix4cd diag1000 = Eigen::Matrix4cd::Zero();
  diag1000(0, 0) = 1.0;
  CHECK(max_abs_diff(c_id, diag1000) < 1e-15);
  CHECK(max_abs_diff(mueller_from_coherency(c_id), MuellerMatrix::Identity()) < 1e-15);

  MuellerMatrix flip = MuellerMatrix::Identity();
  flip(2, 2) = flip(3, 3) = -1.0;
  Eigen::Matrix4cd diag0100 = Eigen::Matrix4cd::Zero();
  diag0100(1, 1) = 1.0;
  CHECK(max_abs_diff(coherency_from_mueller(flip), diag0100) < 1e-15);
  CHECK(max_abs_diff(mueller_from_coherency(diag0100), flip) < 1e-15);

  RngStream rng(13);
  SUBCASE("linearity and random round trip") {
    for (int i = 0; i < 1000; ++i) {
      MuellerMatrix m1, m2;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
          m1(r, c) = rng.gaussian();
          m2(r, c) = rng.gaussian();
        }
      const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      CHECK(max_abs_diff(coherency_from_mueller(a * m1 + b * m2),
                         Eigen::Matrix4cd(a * coherency_from_mueller(m1) +
                                          b * coherency_from_mueller(m2))) < 1e-12);
      CHECK(max_abs_diff(mueller_from_coherency(coherency_from_mueller(m1)), m1) < 1e-9);
      CHECK((coherency_from_mueller(m1) - coherency_from_mueller(m1).adjoint())
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }

  Eigen::Matrix4cd not_hermitian = Eigen::Matrix4cd::Zero();
  not_hermitian(0, 1) = 1.0;
  CHECK_THROWS_AS(mueller_from_coherency(not_hermitian), std::invalid_argument);
}

TEST_CASE("check_physical classification") {
  const PhysicalityReport id = check_physical(MuellerMatrix::Identity());
  CHECK(id.eigenvalue_ok);
  CHECK(id.transmittance_ok);
  CHECK(id.invertible);
  CHECK(id.pure);
  CHECK(id.golden);
  CHECK(id.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(id.eigenvalues[1] == doctest::Approx(0.0));

  MuellerMatrix all_flip = MuellerMatrix::Identity();
  all_flip(1, 1) = all_flip(2, 2) = all_flip(3, 3) = -1.0;
  const PhysicalityReport bad = check_physical(all_flip);
  CHECK_FALSE(bad.eigenvalue_ok);
  CHECK_FALSE(bad.pure);

  const PhysicalityReport zero = check_physical(MuellerMatrix::Zero());
  CHECK_FALSE(zero.invertible);
  CHECK(zero.g_f == 0.0);
  CHECK(zero.g_r == 0.0);
  CHECK_FALSE(zero.pure);
}

TEST_CASE("determinant row/column identities") {
  CHECK(determinant_identity_residuals(MuellerMatrix::Identity()) ==
        std::array<double, 8>{0, 0, 0, 0, 0, 0, 0, 0});

  RngStream rng(14);
  for (int i = 0; i < 1000; ++i) {
    const MuellerMatrix m = jones_to_mueller(random_jones(rng));
    const double scale = std::max(1.0, std::abs(m.determinant()));
    for (double r : determinant_identity_residuals(m)) CHECK(r / scale < 1e-9);
  }

  // Negative control: a random matrix has no reason to satisfy them.
  MuellerMatrix arbitrary;
  arbitrary << 1, 2, 0, 0,
               0, 1, 3, 0,
               0, 0, 1, 0,
               4, 0, 0, 1;
  double worst = 0.0;
  for (double r : determinant_identity_residuals(arbitrary)) worst = std::max(worst, r);
  CHECK(worst > 1.0);
}

TEST_CASE("Jones-generated trace and determinant are non-negative") {
  RngStream rng(15);
  for (int i = 0; i < 1000; ++i) {
    const JonesMatrix j = random_jones(rng);
    const MuellerMatrix m = jones_to_mueller(j);
    MuellerMatrix mk = m;
    JonesMatrix jk = j;
    for (int k = 1; k <= 3; ++k) {
      CHECK(mk.trace() >= -1e-12);
      CHECK(mk.trace() == doctest::Approx(std::norm(jk.trace())).epsilon(1e-9));
      mk = mk * m;
      jk = jk * j;
    }
    CHECK(m.determinant() >= -1e-12);
    CHECK(m.determinant() ==
          doctest::Approx(std::pow(std::abs(j.determinant()), 4.0)).epsilon(1e-9));
  }
}

TEST_CASE("random_physical_mueller passes all conditions") {
  RngStream rng(16);
  for (int i = 0; i < 500; ++i) {
    const PhysicalityReport rep = check_physical(random_physical_mueller(rng));
    CHECK(rep.eigenvalue_ok);
    CHECK(rep.transmittance_ok);
    CHECK(rep.pure);
  }
}
