#include "mafd/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace mafd {

namespace {

double sq(double x) { return x * x; }

double norm2(const Point& p, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += sq(p[k]);
  return s;
}

double dist_center(const Point& p, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += sq(p[k] - 0.5);
  return std::sqrt(s);
}

std::vector<Problem> build_catalog() {
  std::vector<Problem> cat;

  // Smooth radial solution; f stays bounded.
  {
    Problem p;
    p.name = "c2_2d";
    p.dim = 2;
    p.u_exact = [](const Point& x) { return std::exp(norm2(x, 2) / 2.0); };
    p.f = [](const Point& x) {
      const double q = norm2(x, 2);
      return (1.0 + q) * std::exp(q);
    };
    cat.push_back(std::move(p));
  }
  // C1 solution: flat inside the ball of radius 0.2 around the center.
  {
    Problem p;
    p.name = "c1_2d";
    p.dim = 2;
    p.u_exact = [](const Point& x) {
      const double r = dist_center(x, 2);
      return 0.5 * sq(std::max(0.0, r - 0.2));
    };
    p.f = [](const Point& x) {
      const double r = dist_center(x, 2);
      return r > 0.2 ? 1.0 - 0.2 / r : 0.0;
    };
    cat.push_back(std::move(p));
  }
  // Solution with unbounded gradient at the far corner; f blows up there
  // too, so it is only ever sampled at interior nodes.
  {
    Problem p;
    p.name = "blowup_2d";
    p.dim = 2;
    p.u_exact = [](const Point& x) { return -std::sqrt(2.0 - norm2(x, 2)); };
    p.f = [](const Point& x) { return 2.0 / sq(2.0 - norm2(x, 2)); };
    cat.push_back(std::move(p));
  }
  // Cone: Dirichlet data of |x - center| with a grid-scale point source.
  {
    Problem p;
    p.name = "cone_2d";
    p.dim = 2;
    p.needs_convexify = true;
    p.needs_mollified_f = true;
    p.requires_odd_n = true;
    p.u_exact = [](const Point& x) { return dist_center(x, 2); };
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "c2_3d";
    p.dim = 3;
    p.u_exact = [](const Point& x) { return std::exp(norm2(x, 3) / 2.0); };
    p.f = [](const Point& x) {
      const double q = norm2(x, 3);
      return (1.0 + q) * std::exp(1.5 * q);
    };
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "c1_3d";
    p.dim = 3;
    p.u_exact = [](const Point& x) {
      const double r = dist_center(x, 3);
      return 0.5 * sq(std::max(0.0, r - 0.2));
    };
    p.f = [](const Point& x) {
      const double r = dist_center(x, 3);
      // Squared form of 1 - 0.4/r + 0.04/r^2: the expanded expression
      // cancels to roundoff noise (possibly negative) when a node lands
      // just outside the r = 0.2 contact set.
      return r > 0.2 ? sq(1.0 - 0.2 / r) : 0.0;
    };
    cat.push_back(std::move(p));
  }
  {
    Problem p;
    p.name = "blowup_3d";
    p.dim = 3;
    p.u_exact = [](const Point& x) { return -std::sqrt(3.0 - norm2(x, 3)); };
    p.f = [](const Point& x) { return 3.0 * std::pow(3.0 - norm2(x, 3), -2.5); };
    cat.push_back(std::move(p));
  }
  return cat;
}

const std::vector<Problem>& catalog() {
  static const std::vector<Problem> cat = build_catalog();
  return cat;
}

}  // namespace

GridFunction Problem::sample_f(const UniformGrid& grid) const {
  if (grid.dim != dim)
    throw std::invalid_argument("Problem::sample_f: grid dimension mismatch for " + name);
  if (needs_mollified_f) return mollified_dirac_f(grid);
  GridFunction out = sample(grid, f, SampleMode::interior_only);
  for (double v : out.values)
    if (v < 0.0)
      throw std::domain_error("Problem::sample_f: negative f sample in " + name);
  return out;
}

const Problem& lookup_problem(std::string_view name) {
  for (const Problem& p : catalog())
    if (p.name == name) return p;
  throw std::invalid_argument("lookup_problem: unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const Problem& p : catalog()) names.push_back(p.name);
  return names;
}

GridFunction mollified_dirac_f(const UniformGrid& grid) {
  if (grid.dim != 2)
    throw std::invalid_argument("mollified_dirac_f: only defined in 2D");
  if (grid.n % 2 == 0)
    throw std::invalid_argument(
        "mollified_dirac_f: need odd n so a node carries the point source");
  GridFunction out{grid, std::vector<double>(static_cast<std::size_t>(grid.num_nodes()), 0.0)};
  const double strength = 4.0 / (grid.h * grid.h);
  const std::int64_t m = grid.num_nodes();
  for (std::int64_t i = 0; i < m; ++i) {
    const Index idx = grid.multi_index(i);
    if (grid.is_boundary(idx)) continue;
    if (dist_center(grid.coords(idx), 2) <= grid.h / 2.0) out[i] = strength;
  }
  return out;
}

double max_error(const GridFunction& u_num, const Problem& problem) {
  if (u_num.grid.dim != problem.dim)
    throw std::invalid_argument("max_error: grid dimension mismatch");
  double worst = 0.0;
  const std::int64_t m = u_num.grid.num_nodes();
  for (std::int64_t i = 0; i < m; ++i) {
    const Point x = u_num.grid.coords(u_num.grid.multi_index(i));
    worst = std::max(worst, std::abs(u_num[i] - problem.u_exact(x)));
  }
  return worst;
}

}  // namespace mafd
