#include "mafd/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mafd {

namespace {

int gcd3(int a, int b, int c) { return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)); }

bool sign_normalized(const Direction& d) {
  for (int v : d) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // zero vector
}

std::int64_t dot(const Direction& a, const Direction& b) {
  return std::int64_t(a[0]) * b[0] + std::int64_t(a[1]) * b[1] + std::int64_t(a[2]) * b[2];
}

}  // namespace

std::vector<Direction> generate_directions(int dim, int width) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("generate_directions: dim must be 2 or 3");
  if (width < 1)
    throw std::invalid_argument("generate_directions: need width >= 1, got " + std::to_string(width));

  std::vector<Direction> out;
  const int w = width;
  const int lo2 = (dim == 3) ? -w : 0, hi2 = (dim == 3) ? w : 0;
  for (int d0 = 0; d0 <= w; ++d0)
    for (int d1 = -w; d1 <= w; ++d1)
      for (int d2 = lo2; d2 <= hi2; ++d2) {
        const Direction d{d0, d1, d2};
        if (!sign_normalized(d)) continue;
        if (gcd3(d0, d1, d2) != 1) continue;
        out.push_back(d);
      }
  return out;
}

std::vector<std::array<int, 3>> enumerate_orthogonal_bases(
    const std::vector<Direction>& directions, int dim) {
  std::vector<std::array<int, 3>> bases;
  const int m = static_cast<int>(directions.size());
  if (dim == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (dot(directions[i], directions[j]) == 0) bases.push_back({i, j, -1});
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        if (dot(directions[i], directions[j]) != 0) continue;
        for (int k = j + 1; k < m; ++k)
          if (dot(directions[i], directions[k]) == 0 && dot(directions[j], directions[k]) == 0)
            bases.push_back({i, j, k});
      }
  }
  if (bases.empty())
    throw std::logic_error("enumerate_orthogonal_bases: no orthogonal basis found");
  return bases;
}

double directional_resolution(const std::vector<Direction>& directions, int dim,
                              long sphere_samples) {
  if (directions.empty())
    throw std::invalid_argument("directional_resolution: empty direction set");

  if (dim == 2) {
    // Angles folded into [0, pi): directions are axes (lines), not rays.
    std::vector<double> angles;
    angles.reserve(directions.size());
    const double pi = std::acos(-1.0);
    for (const Direction& d : directions) {
      double a = std::atan2(double(d[1]), double(d[0]));
      if (a < 0) a += pi;
      if (a >= pi) a -= pi;
      angles.push_back(a);
    }
    std::sort(angles.begin(), angles.end());
    double max_gap = angles.front() + pi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i)
      max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    return 0.5 * max_gap;
  }

  // 3D: covering radius of the direction lines over a Fibonacci sphere
  // lattice. For each sample keep the best |cos| over all directions; the
  // worst sample yields the resolution.
  std::vector<std::array<double, 3>> units;
  units.reserve(directions.size());
  for (const Direction& d : directions) {
    const double norm = std::sqrt(double(dot(d, d)));
    units.push_back({d[0] / norm, d[1] / norm, d[2] / norm});
  }
  const double pi = std::acos(-1.0);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  double worst_best_cos = 1.0;
  for (long i = 0; i < sphere_samples; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / sphere_samples;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * pi * (i / golden - std::floor(i / golden));
    const double p[3] = {r * std::cos(phi), r * std::sin(phi), z};
    double best = 0.0;
    for (const auto& u : units) {
      const double c = std::abs(p[0] * u[0] + p[1] * u[1] + p[2] * u[2]);
      if (c > best) best = c;
    }
    if (best < worst_best_cos) worst_best_cos = best;
  }
  return std::acos(std::min(1.0, worst_best_cos));
}

StencilSet make_stencil(int dim, int width) {
  const std::vector<Direction> all = generate_directions(dim, width);
  const std::vector<std::array<int, 3>> raw_bases = enumerate_orthogonal_bases(all, dim);

  // Keep only directions referenced by some basis, preserving order.
  std::vector<int> remap(all.size(), -1);
  for (const auto& b : raw_bases)
    for (int j = 0; j < dim; ++j) remap[static_cast<std::size_t>(b[j])] = 0;
  StencilSet s;
  s.dim = dim;
  s.width = width;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (remap[i] == 0) {
      remap[i] = static_cast<int>(s.directions.size());
      s.directions.push_back(all[i]);
    }
  for (const auto& b : raw_bases) {
    std::array<int, 3> nb{-1, -1, -1};
    for (int j = 0; j < dim; ++j) nb[j] = remap[static_cast<std::size_t>(b[j])];
    s.bases.push_back(nb);
  }
  s.dtheta = directional_resolution(s.directions, dim);
  return s;
}

StencilSet make_stencil_by_points(int dim, int points) {
  if (dim == 2) {
    if (points == 9) return make_stencil(2, 1);
    if (points == 17) return make_stencil(2, 2);
    if (points == 33) return make_stencil(2, 3);
    throw std::invalid_argument("make_stencil_by_points: 2D stencils are 9, 17, or 33 points");
  }
  if (dim == 3) {
    if (points == 19) return make_stencil(3, 1);
    throw std::invalid_argument("make_stencil_by_points: the 3D stencil is 19 points");
  }
  throw std::invalid_argument("make_stencil_by_points: dim must be 2 or 3");
}

}  // namespace mafd
