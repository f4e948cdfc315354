#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mafd/grid.hpp"

using namespace mafd;

TEST_CASE("create_grid validates its arguments") {
  CHECK_THROWS_AS(create_grid(1, 5), std::invalid_argument);
  CHECK_THROWS_AS(create_grid(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(create_grid(2, 2), std::invalid_argument);
  CHECK_NOTHROW(create_grid(2, 3));
  CHECK_NOTHROW(create_grid(3, 3));
}

TEST_CASE("grid counts and spacing") {
  UniformGrid g2 = create_grid(2, 5);
  CHECK(g2.h == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g2.num_nodes() == 25);
  CHECK(g2.num_interior() == 9);

  UniformGrid g3 = create_grid(3, 4);
  CHECK(g3.h == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(g3.num_nodes() == 64);
  CHECK(g3.num_interior() == 8);
}

TEST_CASE("linear index round trip covers every node") {
  for (int dim : {2, 3}) {
    UniformGrid g = create_grid(dim, 5);
    for (std::int64_t lin = 0; lin < g.num_nodes(); ++lin) {
      Index idx = g.multi_index(lin);
      CHECK(g.in_bounds(idx));
      CHECK(g.linear_index(idx) == lin);
      for (int k = dim; k < 3; ++k) CHECK(idx[k] == 0);
    }
  }
}

TEST_CASE("row major order puts the last component fastest") {
  UniformGrid g = create_grid(2, 5);
  CHECK(g.linear_index({0, 0, 0}) == 0);
  CHECK(g.linear_index({0, 1, 0}) == 1);
  CHECK(g.linear_index({1, 0, 0}) == 5);
  CHECK(g.linear_index({2, 3, 0}) == 13);

  UniformGrid g3 = create_grid(3, 4);
  CHECK(g3.linear_index({0, 0, 1}) == 1);
  CHECK(g3.linear_index({0, 1, 0}) == 4);
  CHECK(g3.linear_index({1, 0, 0}) == 16);
}

TEST_CASE("boundary and interior classification") {
  for (int dim : {2, 3}) {
    UniformGrid g = create_grid(dim, 4);
    std::int64_t boundary = 0, interior = 0;
    for (std::int64_t lin = 0; lin < g.num_nodes(); ++lin) {
      Index idx = g.multi_index(lin);
      bool expect_boundary = false;
      for (int k = 0; k < dim; ++k)
        if (idx[k] == 0 || idx[k] == g.n - 1) expect_boundary = true;
      CHECK(g.is_boundary(idx) == expect_boundary);
      CHECK(g.is_interior(idx) == !expect_boundary);
      (expect_boundary ? boundary : interior) += 1;
    }
    CHECK(interior == g.num_interior());
    CHECK(boundary + interior == g.num_nodes());
  }
}

TEST_CASE("coords scale the index by h") {
  UniformGrid g = create_grid(2, 5);
  Point p = g.coords({3, 1, 0});
  CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p[2] == 0.0);
}

TEST_CASE("interior numbering is row major and round trips") {
  for (int dim : {2, 3}) {
    UniformGrid g = create_grid(dim, 5);
    std::int64_t next = 0;
    for (std::int64_t lin = 0; lin < g.num_nodes(); ++lin) {
      Index idx = g.multi_index(lin);
      if (g.is_boundary(idx)) {
        CHECK(g.interior_index(idx) == -1);
        continue;
      }
      // Row-major traversal of all nodes visits interior nodes in their own
      // row-major order, so the interior index must count up without gaps.
      std::int64_t ii = g.interior_index(idx);
      CHECK(ii == next);
      ++next;
      Index back = g.interior_multi_index(ii);
      CHECK(back == idx);
    }
    CHECK(next == g.num_interior());
  }
}

TEST_CASE("grid function accessors agree") {
  UniformGrid g = create_grid(2, 4);
  GridFunction u{g, std::vector<double>(static_cast<std::size_t>(g.num_nodes()), 0.0)};
  u.at({2, 1, 0}) = 7.5;
  CHECK(u[g.linear_index({2, 1, 0})] == 7.5);
  u[3] = -2.0;
  CHECK(u.at(g.multi_index(3)) == -2.0);
}

TEST_CASE("sample fills nodes and rejects non-finite values") {
  UniformGrid g = create_grid(2, 5);
  ScalarField fn = [](const Point& p) { return p[0] + 10.0 * p[1]; };
  GridFunction u = sample(g, fn);
  CHECK(u.at({2, 3, 0}) == doctest::Approx(0.5 + 7.5).epsilon(1e-15));

  // Blows up at the far corner: all-node sampling must refuse, interior-only
  // must skip it and keep boundary entries at zero.
  ScalarField singular = [](const Point& p) {
    return 1.0 / ((1.0 - p[0]) + (1.0 - p[1]));
  };
  CHECK_THROWS_AS(sample(g, singular), std::domain_error);
  GridFunction v = sample(g, singular, SampleMode::interior_only);
  CHECK(v.at({4, 4, 0}) == 0.0);
  CHECK(v.at({0, 2, 0}) == 0.0);
  CHECK(v.at({2, 2, 0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("multilinear evaluation reproduces node values bitwise") {
  UniformGrid g = create_grid(2, 7);
  ScalarField fn = [](const Point& p) {
    return std::sin(3.0 * p[0]) * std::cos(2.0 * p[1]) + 0.1 * p[0];
  };
  GridFunction u = sample(g, fn);
  for (std::int64_t lin = 0; lin < g.num_nodes(); ++lin) {
    Point p = g.coords(g.multi_index(lin));
    CHECK(eval_multilinear(u, p) == u[lin]);
  }
}

TEST_CASE("multilinear evaluation is exact on separately affine functions") {
  UniformGrid g = create_grid(2, 5);
  ScalarField fn = [](const Point& p) {
    return 1.0 + 2.0 * p[0] - 3.0 * p[1] + 4.0 * p[0] * p[1];
  };
  GridFunction u = sample(g, fn);
  for (Point p : {Point{0.13, 0.77, 0.0}, Point{0.5, 0.32, 0.0}, Point{0.99, 0.01, 0.0}}) {
    CHECK(eval_multilinear(u, p) == doctest::Approx(fn(p)).epsilon(1e-14));
  }

  UniformGrid g3 = create_grid(3, 4);
  ScalarField fn3 = [](const Point& p) {
    return p[0] - p[1] + 2.0 * p[2] + p[0] * p[1] * p[2];
  };
  GridFunction u3 = sample(g3, fn3);
  Point q{0.21, 0.68, 0.43};
  CHECK(eval_multilinear(u3, q) == doctest::Approx(fn3(q)).epsilon(1e-14));
}

TEST_CASE("coarse to fine interpolation error of a paraboloid") {
  // Bilinear interpolation of x^2 + y^2 from a 5-node grid onto a 9-node
  // grid: the new nodes sit at cell midpoints, where the interpolation error
  // of x^2 on a cell of width 0.25 is exactly 0.25^2/4 per coordinate.
  UniformGrid coarse = create_grid(2, 5);
  UniformGrid fine = create_grid(2, 9);
  ScalarField fn = [](const Point& p) { return p[0] * p[0] + p[1] * p[1]; };
  GridFunction uc = sample(coarse, fn);
  GridFunction uf = interpolate_to_fine(uc, fine);
  double emax = 0.0;
  for (std::int64_t lin = 0; lin < fine.num_nodes(); ++lin) {
    Point p = fine.coords(fine.multi_index(lin));
    emax = std::max(emax, std::abs(uf[lin] - fn(p)));
  }
  CHECK(emax == doctest::Approx(0.03125).epsilon(1e-13));
}

TEST_CASE("interpolation onto the same grid reproduces values") {
  UniformGrid g = create_grid(2, 6);
  ScalarField fn = [](const Point& p) { return std::exp(p[0] - p[1]); };
  GridFunction u = sample(g, fn);
  GridFunction v = interpolate_to_fine(u, g);
  for (std::int64_t lin = 0; lin < g.num_nodes(); ++lin) CHECK(v[lin] == u[lin]);
}
