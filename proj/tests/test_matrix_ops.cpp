#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mafd/matrix_ops.hpp"

using namespace mafd;

namespace {

Eigen::Matrix2d rot2(double theta) {
  Eigen::Matrix2d q;
  q << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return q;
}

Eigen::MatrixXd random_symmetric(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

Eigen::MatrixXd random_spd(int n, std::mt19937& rng) {
  // Orthogonal eigenvectors from a QR factorization, eigenvalues kept well
  // away from zero.
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> lam(0.3, 3.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = lam(rng);
  return q * d.asDiagonal() * q.transpose();
}

}  // namespace

TEST_CASE("det_plus on definite and indefinite matrices") {
  Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  CHECK(det_plus(id) == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::Matrix2d diag;
  diag << 2.0, 0.0, 0.0, -3.0;
  CHECK(det_plus(diag) == doctest::Approx(0.0).epsilon(1e-14));

  // Rotated spectrum keeps the eigenvalue product.
  Eigen::Matrix2d lam;
  lam << 3.0, 0.0, 0.0, 5.0;
  Eigen::Matrix2d q = rot2(0.83);
  CHECK(det_plus(q * lam * q.transpose()) == doctest::Approx(15.0).epsilon(1e-12));

  Eigen::Matrix3d d3 = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  CHECK(det_plus(d3) == doctest::Approx(6.0).epsilon(1e-13));
  Eigen::Matrix3d d3n = Eigen::Vector3d(-1.0, 2.0, 3.0).asDiagonal();
  CHECK(det_plus(d3n) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("det_plus rejects non-symmetric and wrong-size input") {
  Eigen::Matrix2d a;
  a << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(det_plus(a), std::invalid_argument);
  CHECK_THROWS_AS(det_plus(Eigen::MatrixXd::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("adjugate identity holds, including singular matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    for (int n : {2, 3}) {
      Eigen::MatrixXd h = random_symmetric(n, rng);
      double det = h.determinant();
      Eigen::MatrixXd should_be = det * Eigen::MatrixXd::Identity(n, n);
      CHECK((adjugate(h) * h - should_be).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  // Rank-one symmetric matrix: determinant zero, adjugate * H == 0.
  Eigen::Matrix2d s;
  s << 1.0, 2.0, 2.0, 4.0;
  CHECK((adjugate(s) * s).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::Matrix2d a;
  a << 3.0, -1.0, 4.0, 2.0;
  Eigen::Matrix2d adj_expected;
  adj_expected << 2.0, 1.0, -4.0, 3.0;
  CHECK((adjugate(a) - adj_expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("determinant linearization matches the closed 2D form") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd h = random_symmetric(2, rng);
    Eigen::MatrixXd k = random_symmetric(2, rng);
    const double closed =
        h(0, 0) * k(1, 1) + h(1, 1) * k(0, 0) - 2.0 * h(0, 1) * k(0, 1);
    CHECK(linearization_reference(h, k) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("determinant linearization via the inverse when invertible") {
  std::mt19937 rng(13);
  for (int n : {2, 3}) {
    Eigen::MatrixXd h = random_spd(n, rng);
    Eigen::MatrixXd k = random_symmetric(n, rng);
    const double via_inverse = h.determinant() * (h.inverse() * k).trace();
    CHECK(linearization_reference(h, k) == doctest::Approx(via_inverse).epsilon(1e-10));
  }
}

TEST_CASE("basis product over the axis basis multiplies the diagonal") {
  Eigen::Matrix3d h;
  h << 4.0, 1.0, 0.5, 1.0, 6.0, -0.2, 0.5, -0.2, 2.0;
  CHECK(basis_product(h, Eigen::MatrixXd::Identity(3, 3)) ==
        doctest::Approx(4.0 * 6.0 * 2.0).epsilon(1e-13));
}

TEST_CASE("variational determinant bounds det from above") {
  std::mt19937 rng(17);
  auto sample2 = rotation_bases_2d(180);
  auto sample3 = rotation_bases_3d(200);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::MatrixXd h2 = random_spd(2, rng);
    double v2 = variational_det(h2, sample2);
    CHECK(v2 >= h2.determinant() - 1e-12);

    Eigen::MatrixXd h3 = random_spd(3, rng);
    double v3 = variational_det(h3, sample3);
    CHECK(v3 >= h3.determinant() - 1e-12);
  }
}

TEST_CASE("variational determinant is exact at a sampled eigenbasis") {
  // rotation_bases_2d(2) samples the angles 0 and pi/4, so a matrix whose
  // eigenbasis sits at pi/4 is resolved exactly.
  Eigen::Matrix2d lam;
  lam << 1.0, 0.0, 0.0, 9.0;
  Eigen::Matrix2d q = rot2(std::acos(-1.0) / 4.0);
  Eigen::Matrix2d h = q * lam * q.transpose();
  CHECK(variational_det(h, rotation_bases_2d(2)) == doctest::Approx(9.0).epsilon(1e-12));
  // A diagonal matrix is exact already at the axis basis.
  Eigen::Matrix2d d;
  d << 2.5, 0.0, 0.0, 1.5;
  CHECK(variational_det(d, rotation_bases_2d(1)) == doctest::Approx(3.75).epsilon(1e-13));
}

TEST_CASE("variational determinant rejects non-SPD input") {
  Eigen::Matrix2d neg;
  neg << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(variational_det(neg, rotation_bases_2d(4)), std::invalid_argument);
}

TEST_CASE("2D rotation bases sweep a quarter turn") {
  auto bases = rotation_bases_2d(8);
  REQUIRE(bases.size() == 8);
  CHECK((bases[0] - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  const double step = (std::acos(-1.0) / 2.0) / 8.0;
  for (int i = 0; i < 8; ++i) {
    CHECK((bases[static_cast<std::size_t>(i)] - rot2(i * step)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("3D rotation bases are orthonormal and reproducible") {
  auto a = rotation_bases_3d(10);
  auto b = rotation_bases_3d(10);
  REQUIRE(a.size() == 10);
  CHECK((a[0] - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i].transpose() * a[i] - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}
