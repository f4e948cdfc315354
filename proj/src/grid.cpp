#include "mafd/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mafd {

std::int64_t UniformGrid::num_nodes() const {
  std::int64_t m = 1;
  for (int k = 0; k < dim; ++k) m *= n;
  return m;
}

std::int64_t UniformGrid::num_interior() const {
  std::int64_t m = 1;
  for (int k = 0; k < dim; ++k) m *= (n - 2);
  return m;
}

bool UniformGrid::in_bounds(const Index& idx) const {
  for (int k = 0; k < dim; ++k)
    if (idx[k] < 0 || idx[k] > n - 1) return false;
  return true;
}

bool UniformGrid::is_boundary(const Index& idx) const {
  for (int k = 0; k < dim; ++k)
    if (idx[k] == 0 || idx[k] == n - 1) return true;
  return false;
}

bool UniformGrid::is_interior(const Index& idx) const { return !is_boundary(idx); }

Point UniformGrid::coords(const Index& idx) const {
  Point p{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) p[k] = idx[k] * h;
  return p;
}

std::int64_t UniformGrid::linear_index(const Index& idx) const {
  std::int64_t lin = 0;
  for (int k = 0; k < dim; ++k) lin = lin * n + idx[k];
  return lin;
}

Index UniformGrid::multi_index(std::int64_t linear) const {
  Index idx{0, 0, 0};
  for (int k = dim - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(linear % n);
    linear /= n;
  }
  return idx;
}

std::int64_t UniformGrid::interior_index(const Index& idx) const {
  if (is_boundary(idx)) return -1;
  std::int64_t lin = 0;
  for (int k = 0; k < dim; ++k) lin = lin * (n - 2) + (idx[k] - 1);
  return lin;
}

Index UniformGrid::interior_multi_index(std::int64_t interior) const {
  Index idx{0, 0, 0};
  for (int k = dim - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(interior % (n - 2)) + 1;
    interior /= (n - 2);
  }
  return idx;
}

UniformGrid create_grid(int dim, int n) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("create_grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (n < 3)
    throw std::invalid_argument("create_grid: need n >= 3, got " + std::to_string(n));
  UniformGrid g;
  g.dim = dim;
  g.n = n;
  g.h = 1.0 / (n - 1);
  return g;
}

GridFunction sample(const UniformGrid& grid, const ScalarField& fn, SampleMode mode) {
  GridFunction out{grid, std::vector<double>(static_cast<std::size_t>(grid.num_nodes()), 0.0)};
  const std::int64_t m = grid.num_nodes();
  for (std::int64_t i = 0; i < m; ++i) {
    const Index idx = grid.multi_index(i);
    if (mode == SampleMode::interior_only && grid.is_boundary(idx)) continue;
    const double v = fn(grid.coords(idx));
    if (!std::isfinite(v)) {
      const Point p = grid.coords(idx);
      throw std::domain_error("sample: non-finite value at node (" + std::to_string(p[0]) + ", " +
                              std::to_string(p[1]) + ", " + std::to_string(p[2]) + ")");
    }
    out[i] = v;
  }
  return out;
}

namespace {

// Maps a coordinate to (cell, local weight) on an m-node axis. Values within
// 1e-9 grid units of a node are snapped onto it, so nested grids reproduce
// node values exactly instead of blending adjacent cells across rounding.
void locate(double x, int m, int& cell, double& t) {
  double s = x * (m - 1);
  const double r = std::round(s);
  if (std::abs(s - r) < 1e-9) s = r;
  cell = static_cast<int>(std::floor(s));
  if (cell < 0) cell = 0;
  if (cell > m - 2) cell = m - 2;
  t = s - cell;
}

}  // namespace

double eval_multilinear(const GridFunction& fn, const Point& p) {
  const UniformGrid& g = fn.grid;
  int cell[3] = {0, 0, 0};
  double t[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < g.dim; ++k) locate(p[k], g.n, cell[k], t[k]);

  double acc = 0.0;
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    Index idx{0, 0, 0};
    for (int k = 0; k < g.dim; ++k) {
      const int bit = (c >> k) & 1;
      w *= bit ? t[k] : (1.0 - t[k]);
      idx[k] = cell[k] + bit;
    }
    if (w != 0.0) acc += w * fn.at(idx);
  }
  return acc;
}

GridFunction interpolate_to_fine(const GridFunction& coarse, const UniformGrid& fine) {
  if (coarse.grid.dim != fine.dim)
    throw std::invalid_argument("interpolate_to_fine: dimension mismatch");
  GridFunction out{fine, std::vector<double>(static_cast<std::size_t>(fine.num_nodes()), 0.0)};
  const std::int64_t m = fine.num_nodes();
  for (std::int64_t i = 0; i < m; ++i)
    out[i] = eval_multilinear(coarse, fine.coords(fine.multi_index(i)));
  return out;
}

}  // namespace mafd
