#pragma once

#include <Eigen/Sparse>
#include <stdexcept>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/ma_operator.hpp"
#include "mafd/problems.hpp"
#include "mafd/stencil.hpp"

namespace mafd {

/// Raised when a sparse direct solve fails or misses its accuracy contract:
/// the system is singular or numerically rank-deficient, which for the
/// linearized operator signals loss of ellipticity.
class LinearSolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Direct sparse solve (LU factorization). Postcondition, checked:
/// |A x - b|_inf <= 1e-10 * (|A|_inf |x|_inf + |b|_inf). Violations and
/// factorization failures raise LinearSolveFailure.
Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b);

enum class SolveMethod { newton, explicit_euler, semi_implicit };
enum class SchemeKind { monotone, regularized };
enum class InitKind { poisson, poisson_convexify, given };

struct SolverConfig {
  SolveMethod method = SolveMethod::newton;
  SchemeKind scheme = SchemeKind::monotone;
  double tol = 1e-8;       // l-inf residual stopping tolerance
  long max_iter = 100;
  double delta = 1e-2;     // regularized scheme smoothing
  double epsilon = -1.0;   // Jacobian floor; negative = 1e-8/(2h^2)
  double alpha_min = 1.0 / (1 << 20);  // damping floor 2^-20; backtracking
                                       // halves alpha starting from 1
  InitKind init = InitKind::poisson;
  // Initialization grid coarsening; 1 (the default) solves the init problem
  // on the target grid itself. Coarsening saves a little setup time on large
  // grids, but the multilinear interpolant of the coarse solution is only
  // piecewise linear: its kinks start Newton at a non-convex iterate and cost
  // far more iterations than the coarse solve saves, so it is opt-in.
  int coarse_init_factor = 1;
  const GridFunction* initial_guess = nullptr;  // for InitKind::given
};

/// Config with the problem's default initialization pipeline (the cone runs
/// the convex envelope after the Poisson init; nothing else does).
SolverConfig default_config(const Problem& problem);

struct SolveReport {
  bool converged = false;
  long iterations = 0;
  std::vector<double> residual_history;  // l-inf residuals, starting with the initial iterate's
  std::vector<double> damping_history;   // accepted alpha per Newton step
  double seconds = 0.0;
};

struct SolveOutcome {
  GridFunction solution;
  SolveReport report;
};

/// Initial iterate: solve the discrete Laplace problem
///   Laplacian u0 = (d! f)^(1/d),  u0 = g on the boundary,
/// optionally on a grid coarsened by coarse_factor (clamped to >= 3 nodes,
/// rounded up to odd so grid-centered sources keep their center node) and
/// interpolated back, with the fine boundary re-sampled from g exactly.
GridFunction poisson_init(const Problem& problem, const UniformGrid& grid, int coarse_factor);

/// Largest grid function below u that is discretely convex along the stencil
/// directions: Gauss-Seidel iteration of
///   u(i) <- min(u_input(i), min over directions of the affine interpolation
///               of the two arm values through the node)
/// with boundary-shortened arms, iterated well past the 1e-10 increment
/// contract and re-swept until D_nunu >= -1e-9 holds everywhere. Boundary
/// values are taken from g when given, else interpolated from u's own
/// boundary nodes.
GridFunction convex_envelope(const GridFunction& u, const StencilSet& stencil,
                             const BoundaryData* g = nullptr);

/// Damped Newton on the monotone scheme (Danskin Jacobian with the epsilon
/// floor) or the regularized scheme (exact Jacobian): backtracks alpha from 1
/// by halving until the l-inf residual strictly decreases, or - when the
/// l-inf norm sits at a node whose residual the step cannot move (a pinned
/// zero product) - until it is nonincreasing with a strictly decreasing l2
/// norm. The recorded l-inf history is therefore nonincreasing, with equal
/// consecutive entries possible on pinned plateaus. Linear-solve failure
/// propagates as LinearSolveFailure; damping underflow yields a
/// non-converged report.
SolveOutcome newton_solve(const Problem& problem, const UniformGrid& grid,
                          const StencilSet& stencil, const SolverConfig& config);

/// Forward-Euler fixed-point iteration u += dt (MA[u] - f) with the adaptive
/// contraction step dt = 1 / max_abs_row_sum(Danskin Jacobian), an O(h^2)
/// nonlinear CFL step. Monotone scheme only.
SolveOutcome explicit_solve(const Problem& problem, const UniformGrid& grid,
                            const StencilSet& stencil, const SolverConfig& config);

/// 2D fixed-point iteration: solve Laplacian u_next = sqrt(2 f + |D2 u|^2)
/// with |D2 u|^2 = uxx^2 + uyy^2 + 2 uxy^2 (centered differences, 4-corner
/// cross term). The reported residual is the standard finite-difference
/// Monge-Ampere residual uxx uyy - uxy^2 - f, which vanishes identically at
/// the discrete fixed point. Stops when that residual or the iterate
/// increment drops to tol. Rejects dim != 2.
SolveOutcome semi_implicit_solve_2d(const Problem& problem, const UniformGrid& grid,
                                    const SolverConfig& config);

}  // namespace mafd
