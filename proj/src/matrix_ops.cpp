#include "mafd/matrix_ops.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mafd {

namespace {

void check_small_square(const Eigen::MatrixXd& H, const char* who) {
  if (H.rows() != H.cols() || (H.rows() != 2 && H.rows() != 3))
    throw std::invalid_argument(std::string(who) + ": expected a 2x2 or 3x3 matrix");
}

void check_symmetric(const Eigen::MatrixXd& H, const char* who) {
  check_small_square(H, who);
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
}

}  // namespace

double det_plus(const Eigen::MatrixXd& H) {
  check_symmetric(H, "det_plus");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  double prod = 1.0;
  for (Eigen::Index i = 0; i < H.rows(); ++i) prod *= std::max(0.0, es.eigenvalues()[i]);
  return prod;
}

Eigen::MatrixXd adjugate(const Eigen::MatrixXd& H) {
  check_small_square(H, "adjugate");
  const Eigen::Index d = H.rows();
  Eigen::MatrixXd adj(d, d);
  if (d == 2) {
    adj << H(1, 1), -H(0, 1), -H(1, 0), H(0, 0);
    return adj;
  }
  // adj = transpose of the cofactor matrix: adj(i,j) = (-1)^(i+j) * M_ji
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      const Eigen::Index r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const Eigen::Index c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj(i, j) = H(r0, c0) * H(r1, c1) - H(r0, c1) * H(r1, c0);
    }
  return adj;
}

double linearization_reference(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K) {
  check_symmetric(H, "linearization_reference");
  check_symmetric(K, "linearization_reference");
  if (H.rows() != K.rows())
    throw std::invalid_argument("linearization_reference: size mismatch");
  return (adjugate(H) * K).trace();
}

double basis_product(const Eigen::MatrixXd& H, const OrthoBasis& basis) {
  double prod = 1.0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const Eigen::VectorXd nu = basis.col(j);
    prod *= nu.dot(H * nu);
  }
  return prod;
}

double variational_det(const Eigen::MatrixXd& H, const std::vector<OrthoBasis>& sample) {
  check_symmetric(H, "variational_det");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("variational_det: matrix is not positive definite");
  if (sample.empty())
    throw std::invalid_argument("variational_det: empty basis sample");
  double best = basis_product(H, sample.front());
  for (std::size_t i = 1; i < sample.size(); ++i)
    best = std::min(best, basis_product(H, sample[i]));
  return best;
}

std::vector<OrthoBasis> rotation_bases_2d(int k) {
  if (k < 1) throw std::invalid_argument("rotation_bases_2d: need k >= 1");
  std::vector<OrthoBasis> out;
  out.reserve(static_cast<std::size_t>(k));
  const double step = std::acos(-1.0) / 2.0 / k;
  for (int i = 0; i < k; ++i) {
    const double c = std::cos(i * step), s = std::sin(i * step);
    OrthoBasis b(2, 2);
    b << c, -s, s, c;
    out.push_back(b);
  }
  return out;
}

std::vector<OrthoBasis> rotation_bases_3d(int k, unsigned seed) {
  if (k < 1) throw std::invalid_argument("rotation_bases_3d: need k >= 1");
  std::vector<OrthoBasis> out;
  out.reserve(static_cast<std::size_t>(k));
  out.push_back(Eigen::MatrixXd::Identity(3, 3));
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (out.size() < static_cast<std::size_t>(k)) {
    Eigen::MatrixXd A(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = gauss(rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
    out.push_back(Q);
  }
  return out;
}

}  // namespace mafd
