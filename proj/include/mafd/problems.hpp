#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/ma_operator.hpp"

namespace mafd {

/// One benchmark problem: closed-form solution u, right-hand side f (or a
/// grid-dependent mollified point source), and Dirichlet data g = trace of
/// u_exact, evaluable at arbitrary boundary points.
struct Problem {
  std::string name;
  int dim = 2;
  bool needs_convexify = false;   // default init pipeline runs convex_envelope
  bool needs_mollified_f = false; // f is the grid-scale point source
  bool requires_odd_n = false;    // the source node must exist
  ScalarField u_exact;
  ScalarField f;  // unset when needs_mollified_f

  /// f sampled at interior nodes (or the mollified source for the cone).
  GridFunction sample_f(const UniformGrid& grid) const;
  BoundaryData boundary() const { return BoundaryData(u_exact); }
};

/// The problem catalog: c2_2d, c1_2d, blowup_2d, cone_2d, c2_3d, c1_3d,
/// blowup_3d. Unknown names are rejected.
const Problem& lookup_problem(std::string_view name);
std::vector<std::string> problem_names();

/// Grid-scale point source: 4/h^2 at every node within distance h/2 of the
/// center (0.5, 0.5) - exactly the center node when n is odd - zero
/// elsewhere. Note the discrete mass is sum f h^2 = 4, taken as written; it
/// is not rescaled to the mass pi of the measure it stands in for.
/// 2D only; even n is rejected (no node lies within h/2 of the center).
GridFunction mollified_dirac_f(const UniformGrid& grid);

/// max over all nodes of |u_num - u_exact| (boundary entries carry g and
/// match exactly, so this equals the interior maximum).
double max_error(const GridFunction& u_num, const Problem& problem);

}  // namespace mafd
