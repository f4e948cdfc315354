#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace mafd {

// Multi-index and coordinates; components at positions >= dim are kept at zero.
using Index = std::array<int, 3>;
using Point = std::array<double, 3>;

/// Uniform grid on the unit square/cube with n nodes per side and spacing
/// h = 1/(n-1). Node coordinates are i*h componentwise. Nodes are stored in
/// row-major order with the last index component varying fastest:
///   d=2:  linear = i0*n + i1
///   d=3:  linear = (i0*n + i1)*n + i2
/// A node is a boundary node exactly when some index component is 0 or n-1;
/// every other node is interior. Interior nodes carry their own row-major
/// numbering (used as the unknown ordering of the sparse linear systems).
struct UniformGrid {
  int dim = 2;
  int n = 3;
  double h = 0.5;

  std::int64_t num_nodes() const;
  std::int64_t num_interior() const;

  bool in_bounds(const Index& idx) const;
  bool is_boundary(const Index& idx) const;
  bool is_interior(const Index& idx) const;

  Point coords(const Index& idx) const;

  std::int64_t linear_index(const Index& idx) const;
  Index multi_index(std::int64_t linear) const;

  /// Row-major index among interior nodes, or -1 for boundary nodes.
  std::int64_t interior_index(const Index& idx) const;
  Index interior_multi_index(std::int64_t interior) const;
};

/// Builds a grid after validating dim in {2,3} and n >= 3.
UniformGrid create_grid(int dim, int n);

/// Scalar field sampled at grid nodes, in the grid's row-major node order.
struct GridFunction {
  UniformGrid grid;
  std::vector<double> values;

  double operator[](std::int64_t i) const { return values[static_cast<std::size_t>(i)]; }
  double& operator[](std::int64_t i) { return values[static_cast<std::size_t>(i)]; }
  double at(const Index& idx) const { return values[static_cast<std::size_t>(grid.linear_index(idx))]; }
  double& at(const Index& idx) { return values[static_cast<std::size_t>(grid.linear_index(idx))]; }
};

using ScalarField = std::function<double(const Point&)>;

enum class SampleMode { all_nodes, interior_only };

/// Evaluates fn at node coordinates. interior_only skips boundary nodes
/// (their entries stay zero), for data that blows up on the boundary.
/// Throws std::domain_error if an evaluated value is not finite.
GridFunction sample(const UniformGrid& grid, const ScalarField& fn,
                    SampleMode mode = SampleMode::all_nodes);

/// Multilinear (bilinear/trilinear) interpolation of a sampled function at an
/// arbitrary point of [0,1]^d. Near-exact node hits are snapped so that
/// evaluation at node coordinates reproduces node values bitwise.
double eval_multilinear(const GridFunction& fn, const Point& p);

/// Interpolates a coarse grid function onto the nodes of another grid of the
/// same dimension. Reproduces values exactly when the grids coincide; exact
/// on functions affine in each coordinate separately.
GridFunction interpolate_to_fine(const GridFunction& coarse, const UniformGrid& fine);

}  // namespace mafd
