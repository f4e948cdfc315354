#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mafd {

// Integer grid offset; components at positions >= dim are zero.
using Direction = std::array<int, 3>;

/// Directions and orthogonal bases of a wide-stencil operator.
///
/// `directions` holds sign-normalized coprime integer vectors in a fixed
/// deterministic enumeration order. `bases` lists every unordered set of dim
/// mutually orthogonal directions once, as index tuples into `directions`,
/// in lexicographic tuple order; the axis-aligned basis always comes first.
/// The fold order of the regularized scheme and the argmin tie-break of the
/// monotone scheme both follow this basis order, so it must never change.
struct StencilSet {
  int dim = 2;
  int width = 1;
  std::vector<Direction> directions;
  std::vector<std::array<int, 3>> bases;
  double dtheta = 0.0;

  /// Nodes touched: center + two arms per direction.
  int node_count() const { return 1 + 2 * static_cast<int>(directions.size()); }
};

/// All integer vectors with max-norm <= width, coprime components, and sign
/// normalized so the first nonzero component is positive. Deterministic
/// order: lexicographic in (d0, d1[, d2]) with d0 >= 0.
std::vector<Direction> generate_directions(int dim, int width);

/// Every dim-tuple of mutually orthogonal directions (exact integer dot
/// products), each unordered set listed once as increasing index tuples in
/// lexicographic order. Throws if no basis exists (the axis basis must).
std::vector<std::array<int, 3>> enumerate_orthogonal_bases(
    const std::vector<Direction>& directions, int dim);

/// Directional resolution: the largest angle between an arbitrary line
/// through the origin and the nearest stencil direction. Exact in 2D (half
/// the largest angular gap); estimated in 3D from quasi-uniform sphere
/// samples (Fibonacci lattice, sample count documented by the parameter).
double directional_resolution(const std::vector<Direction>& directions, int dim,
                              long sphere_samples = 1000000);

/// Bundles directions, bases, and dtheta for a given width. Directions that
/// belong to no orthogonal basis are dropped (the operator never reads them);
/// in 2D every direction keeps its 90-degree partner so nothing is dropped,
/// in 3D width 1 the body diagonals go, leaving the 19-point stencil.
StencilSet make_stencil(int dim, int width);

/// Named stencils: 9/17/33-point in 2D (widths 1/2/3), 19-point in 3D.
StencilSet make_stencil_by_points(int dim, int points);

}  // namespace mafd
