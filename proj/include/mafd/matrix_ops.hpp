#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mafd {

/// Product of the positive parts of the eigenvalues of a symmetric 2x2 or
/// 3x3 matrix (the convexified determinant). Rejects non-symmetric input.
double det_plus(const Eigen::MatrixXd& H);

/// Adjugate (transpose of the cofactor matrix) of a 2x2 or 3x3 matrix.
/// Valid for singular input; adjugate(H) * H = det(H) * I.
Eigen::MatrixXd adjugate(const Eigen::MatrixXd& H);

/// trace(adjugate(H) * K): the derivative of det at H in direction K, for
/// symmetric H, K. Equals det(H) * trace(H^-1 K) when H is invertible.
double linearization_reference(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K);

// One orthonormal basis, stored as matrix columns.
using OrthoBasis = Eigen::MatrixXd;

/// Product over basis columns nu of nu^T H nu.
double basis_product(const Eigen::MatrixXd& H, const OrthoBasis& basis);

/// Minimum of basis_product over the sampled bases. For SPD H every sampled
/// value is >= det(H); the minimum approaches det(H) as the sample refines
/// (equality at the eigenbasis). Rejects non-SPD input.
double variational_det(const Eigen::MatrixXd& H, const std::vector<OrthoBasis>& sample);

/// k plane rotations at angles i*(pi/2)/k, i = 0..k-1 (starts at the axes;
/// the basis product has period pi/2 in the angle).
std::vector<OrthoBasis> rotation_bases_2d(int k);

/// k deterministic pseudo-random orthonormal bases of 3-space, seeded for
/// reproducibility; the first entry is the axis basis.
std::vector<OrthoBasis> rotation_bases_3d(int k, unsigned seed = 12345);

}  // namespace mafd
