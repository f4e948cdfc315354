#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/problems.hpp"

using namespace mafd;

namespace {

// Determinant of the central finite-difference Hessian of u at p; the probe
// points stay far enough from any kink that fourth derivatives are bounded.
double fd_hessian_det(const ScalarField& u, const Point& p, int dim) {
  const double h = 1e-4;
  auto shift = [&](int k, double s, Point q) {
    q[k] += s;
    return q;
  };
  Eigen::MatrixXd hess(dim, dim);
  for (int a = 0; a < dim; ++a) {
    hess(a, a) = (u(shift(a, h, p)) + u(shift(a, -h, p)) - 2.0 * u(p)) / (h * h);
    for (int b = a + 1; b < dim; ++b) {
      const double v = (u(shift(b, h, shift(a, h, p))) + u(shift(b, -h, shift(a, -h, p))) -
                        u(shift(b, -h, shift(a, h, p))) - u(shift(b, h, shift(a, -h, p)))) /
                       (4.0 * h * h);
      hess(a, b) = hess(b, a) = v;
    }
  }
  return hess.determinant();
}

}  // namespace

TEST_CASE("catalog names and lookup") {
  std::vector<std::string> names = problem_names();
  REQUIRE(names.size() == 7);
  CHECK(names[0] == "c2_2d");
  CHECK(names[1] == "c1_2d");
  CHECK(names[2] == "blowup_2d");
  CHECK(names[3] == "cone_2d");
  CHECK(names[4] == "c2_3d");
  CHECK(names[5] == "c1_3d");
  CHECK(names[6] == "blowup_3d");
  for (const std::string& name : names) CHECK(lookup_problem(name).name == name);
  CHECK_THROWS_AS(lookup_problem("no_such_example"), std::invalid_argument);
}

TEST_CASE("problem flags") {
  for (const std::string& name : problem_names()) {
    const Problem& p = lookup_problem(name);
    const bool is_cone = name == "cone_2d";
    CHECK(p.needs_convexify == is_cone);
    CHECK(p.needs_mollified_f == is_cone);
    CHECK(p.requires_odd_n == is_cone);
    CHECK(p.dim == (name.ends_with("_3d") ? 3 : 2));
  }
}

TEST_CASE("right-hand sides match the Hessian determinant of the solution") {
  struct Probe {
    const char* name;
    Point p;
  };
  const Probe probes[] = {
      {"c2_2d", {0.3, 0.4, 0.0}},
      {"c2_2d", {0.7, 0.2, 0.0}},
      {"blowup_2d", {0.2, 0.3, 0.0}},
      {"blowup_2d", {0.8, 0.8, 0.0}},
      {"c1_2d", {0.85, 0.5, 0.0}},   // outside the flat ball
      {"c1_2d", {0.2, 0.2, 0.0}},
      {"c2_3d", {0.3, 0.4, 0.6}},
      {"c1_3d", {0.85, 0.5, 0.5}},
      {"blowup_3d", {0.25, 0.5, 0.75}},
  };
  for (const Probe& probe : probes) {
    const Problem& prob = lookup_problem(probe.name);
    const double det = fd_hessian_det(prob.u_exact, probe.p, prob.dim);
    const double f = prob.f(probe.p);
    CHECK(det == doctest::Approx(f).epsilon(1e-4));
  }
  // Inside the contact ball both u and f vanish identically.
  CHECK(lookup_problem("c1_2d").u_exact({0.5, 0.55, 0.0}) == 0.0);
  CHECK(lookup_problem("c1_2d").f({0.5, 0.55, 0.0}) == 0.0);
  CHECK(lookup_problem("c1_3d").f({0.5, 0.5, 0.55}) == 0.0);
  // f of the C1 examples never dips below zero, not even by roundoff just
  // outside the contact set.
  const Problem& c13 = lookup_problem("c1_3d");
  for (double r : {0.2 + 1e-16, 0.2 + 1e-12, 0.2 + 1e-8, 0.25}) {
    CHECK(c13.f({0.5 + r, 0.5, 0.5}) >= 0.0);
  }
}

TEST_CASE("closed-form corner values of the blow-up examples") {
  const Problem& b3 = lookup_problem("blowup_3d");
  CHECK(b3.u_exact({0.0, 0.0, 0.0}) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
  CHECK(b3.f({0.0, 0.0, 0.0}) ==
        doctest::Approx(3.0 * std::pow(3.0, -2.5)).epsilon(1e-15));  // 0.19245...
  const Problem& b2 = lookup_problem("blowup_2d");
  CHECK(b2.u_exact({0.0, 0.0, 0.0}) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  // The gradient blows up toward the far corner; f is singular exactly there.
  CHECK((std::isinf(b2.f({1.0, 1.0, 0.0})) || b2.f({1.0, 1.0, 0.0}) > 1e12));
}

TEST_CASE("cone solution is the distance to the center") {
  const Problem& cone = lookup_problem("cone_2d");
  CHECK(cone.u_exact({0.9, 0.5, 0.0}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(cone.u_exact({0.5, 0.5, 0.0}) == 0.0);
  CHECK(cone.u_exact({0.0, 0.0, 0.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("mollified point source concentrates at the center node") {
  for (int n : {31, 63}) {
    UniformGrid grid = create_grid(2, n);
    GridFunction f = mollified_dirac_f(grid);
    const double h2 = grid.h * grid.h;
    const int c = (n - 1) / 2;
    double mass = 0.0;
    std::int64_t nonzero = 0;
    for (std::int64_t lin = 0; lin < grid.num_nodes(); ++lin) {
      if (f[lin] != 0.0) ++nonzero;
      mass += f[lin] * h2;
    }
    CHECK(nonzero == 1);
    CHECK(f.at({c, c, 0}) == doctest::Approx(4.0 / h2).epsilon(1e-13));
    CHECK(mass == doctest::Approx(4.0).epsilon(1e-13));
  }
  CHECK(mollified_dirac_f(create_grid(2, 31)).at({15, 15, 0}) ==
        doctest::Approx(3600.0).epsilon(1e-13));
  CHECK(mollified_dirac_f(create_grid(2, 63)).at({31, 31, 0}) ==
        doctest::Approx(15376.0).epsilon(1e-13));
  CHECK_THROWS_AS(mollified_dirac_f(create_grid(2, 32)), std::invalid_argument);
  CHECK_THROWS_AS(mollified_dirac_f(create_grid(3, 7)), std::invalid_argument);
}

TEST_CASE("sample_f picks the closed form or the point source") {
  UniformGrid grid = create_grid(2, 9);
  const Problem& c2 = lookup_problem("c2_2d");
  GridFunction f = c2.sample_f(grid);
  for (std::int64_t lin = 0; lin < grid.num_nodes(); ++lin) {
    Index idx = grid.multi_index(lin);
    if (grid.is_interior(idx)) {
      Point p = grid.coords(idx);
      CHECK(f[lin] == doctest::Approx(c2.f(p)).epsilon(1e-14));
    } else {
      CHECK(f[lin] == 0.0);
    }
  }

  // blowup_2d's f is singular at the far corner but interior-only sampling
  // never touches it.
  CHECK_NOTHROW(lookup_problem("blowup_2d").sample_f(grid));

  const Problem& cone = lookup_problem("cone_2d");
  GridFunction fc = cone.sample_f(grid);
  CHECK(fc.at({4, 4, 0}) == doctest::Approx(4.0 / (grid.h * grid.h)).epsilon(1e-13));
}

TEST_CASE("boundary data wraps the exact solution") {
  const Problem& c2 = lookup_problem("c2_2d");
  BoundaryData g = c2.boundary();
  Point p{1.0, 0.33, 0.0};
  CHECK(g(p) == doctest::Approx(c2.u_exact(p)).epsilon(1e-15));
}

TEST_CASE("max_error reports the largest node deviation") {
  const Problem& c2 = lookup_problem("c2_2d");
  UniformGrid grid = create_grid(2, 7);
  GridFunction u = sample(grid, c2.u_exact);
  CHECK(max_error(u, c2) == doctest::Approx(0.0).epsilon(1e-15));
  u.at({3, 2, 0}) += 5e-3;
  u.at({2, 2, 0}) -= 1e-3;
  CHECK(max_error(u, c2) == doctest::Approx(5e-3).epsilon(1e-12));
}
