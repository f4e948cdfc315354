#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <memory>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/stencil.hpp"

namespace mafd {

/// Scheme knobs. delta is the smoothing scale of the regularized scheme.
/// epsilon floors the Jacobian cofactor products (and only those: residuals
/// never see it, so fixed points are unchanged); a negative value selects
/// the grid-dependent default 1e-8 / (2 h^2).
struct SchemeParams {
  double delta = 1e-2;
  double epsilon = -1.0;
};

double resolve_epsilon(const SchemeParams& params, const UniformGrid& grid);

/// smooth_max(a,b,d) = (a + b + sqrt((a-b)^2 + d^2)) / 2, and the mirrored
/// smooth_min. Both reduce to max/min exactly at delta = 0, differ from them
/// by at most delta/2, and are nondecreasing in each argument.
double smooth_max(double a, double b, double delta);
double smooth_min(double a, double b, double delta);

/// Dirichlet data evaluator at arbitrary boundary points (the shortened
/// stencil arms end between nodes). Wraps a closed form when available;
/// from_node_values falls back to face-multilinear interpolation of the
/// boundary entries of a stored grid function.
class BoundaryData {
 public:
  explicit BoundaryData(ScalarField g) : g_(std::move(g)) {}
  static BoundaryData from_node_values(const GridFunction& u);
  double operator()(const Point& p) const { return g_(p); }

 private:
  ScalarField g_;
};

/// One endpoint of a three-point directional difference.
struct ArmEnd {
  std::int64_t node = -1;     // full-grid node index; -1 when the arm was
                              // shortened to an off-node boundary point
  std::int64_t unknown = -1;  // interior-unknown index of `node`, or -1
  double boundary_value = 0;  // Dirichlet value at the intersection (node == -1)
  double t = 0;               // Euclidean arm length
};

/// Three-point second difference along one direction at one interior node.
/// Full arms give the centered formula with t+ = t- = |nu| h; an arm leaving
/// the domain is shortened to its exact intersection with the boundary and
/// the unequal-arm weights
///   w+ = 2 / (t+ (t+ + t-)),  w0 = -2 / (t+ t-),  w- = 2 / (t- (t+ + t-))
/// are used instead. The weights sum to zero and annihilate linears for any
/// arm lengths, and are exact on quadratics.
struct DiffRecord {
  ArmEnd plus, minus;
  double w_plus = 0, w_center = 0, w_minus = 0;
};

DiffRecord make_diff_record(const UniformGrid& grid, const BoundaryData& g, const Index& node,
                            const Direction& nu);

struct DirectionalDifference {
  DiffRecord record;
  double value = 0;
};

/// The second directional difference D_nunu u at an interior node, built
/// from u's node values and g at off-node boundary intersections.
DirectionalDifference second_directional_difference(const GridFunction& u, const BoundaryData& g,
                                                    const Index& node, const Direction& nu);

/// Difference records for every (interior node, stencil direction) pair,
/// built once per (grid, stencil, boundary data) and shared by residual and
/// Jacobian evaluations. Boundary intersections are evaluated at build time.
class DifferencePlan {
 public:
  DifferencePlan(const UniformGrid& grid, const StencilSet& stencil, const BoundaryData& g);

  const UniformGrid& grid() const { return grid_; }
  const StencilSet& stencil() const { return stencil_; }
  std::int64_t center_node(std::int64_t interior) const { return centers_[static_cast<std::size_t>(interior)]; }
  const DiffRecord& record(std::int64_t interior, int dir) const {
    return records_[static_cast<std::size_t>(interior) * ndirs_ + static_cast<std::size_t>(dir)];
  }

  /// D_nunu u for one direction at one interior node.
  double diff_value(const GridFunction& u, std::int64_t interior, int dir) const;
  /// All directional values at one interior node, into out[0..ndirs).
  void diff_values(const GridFunction& u, std::int64_t interior, double* out) const;

 private:
  UniformGrid grid_;
  StencilSet stencil_;
  std::size_t ndirs_;
  std::vector<DiffRecord> records_;
  std::vector<std::int64_t> centers_;
};

/// Residual and per-node argmin of the monotone scheme:
///   residual(i) = min over bases of prod_j max(D_j u, 0)  -  f(i).
/// Ties pick the first basis in enumeration order.
struct MonotoneResult {
  Eigen::VectorXd residual;
  std::vector<int> active_basis;
};

MonotoneResult ma_monotone(const DifferencePlan& plan, const GridFunction& u,
                           const GridFunction& f);

/// Residual of the regularized scheme: per basis the product of
/// smooth_max(D, 0, delta), folded across bases with smooth_min in basis
/// order (left fold), minus f.
Eigen::VectorXd ma_regularized(const DifferencePlan& plan, const GridFunction& u,
                               const GridFunction& f, double delta);

/// Danskin Jacobian of the monotone residual on interior unknowns: row i uses
/// the active basis; direction j contributes its linear stencil scaled by
/// prod_{k != j} max(|D_k u|, epsilon). The magnitude keeps rows at the local
/// curvature scale on non-convex iterates; wherever the iterate is convex
/// along the active basis this is the one-sided derivative of the scheme.
/// Boundary arms carry no columns.
Eigen::SparseMatrix<double> jacobian_monotone(const DifferencePlan& plan, const GridFunction& u,
                                              const std::vector<int>& active_basis,
                                              double epsilon);

/// Exact chain-rule Jacobian of the regularized residual; every direction of
/// every basis contributes with a strictly positive coefficient.
Eigen::SparseMatrix<double> jacobian_regularized(const DifferencePlan& plan,
                                                 const GridFunction& u, double delta);

/// max over interior rows of |diagonal| + sum of |off-diagonal| entries of
/// the Danskin Jacobian; its reciprocal is the contraction time step of the
/// explicit iteration.
double max_abs_row_sum(const DifferencePlan& plan, const GridFunction& u,
                       const std::vector<int>& active_basis, double epsilon);

/// Gather interior entries of u into an interior-ordered vector.
Eigen::VectorXd interior_vector(const GridFunction& u);
/// Scatter an interior-ordered vector into a grid function; boundary zero.
GridFunction to_grid_function(const UniformGrid& grid, const Eigen::VectorXd& interior);

// Convenience wrappers that build a one-shot plan.
MonotoneResult ma_monotone(const GridFunction& u, const GridFunction& f, const BoundaryData& g,
                           const StencilSet& stencil, const SchemeParams& params);
Eigen::VectorXd ma_regularized(const GridFunction& u, const GridFunction& f,
                               const BoundaryData& g, const StencilSet& stencil,
                               const SchemeParams& params);

}  // namespace mafd
