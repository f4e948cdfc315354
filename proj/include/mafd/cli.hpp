#pragma once

#include <string>
#include <vector>

#include "mafd/solvers.hpp"

namespace mafd {

/// One parsed command line. The front end fills this in and hands it to
/// run_request; everything here is also usable programmatically (the tests
/// drive it without spawning a process).
struct RunRequest {
  std::string subcommand;        // solve | study | compare | gradient-map
  int dim = 0;                   // 0: infer from the example name
  std::vector<int> n_values;     // study takes a list; others exactly one
  std::vector<int> stencils;     // stencil node counts; study takes a list
  std::string example;
  std::vector<std::string> methods;  // compare takes a list; others one
  SchemeKind scheme = SchemeKind::monotone;
  double delta = 1e-2;
  double epsilon = -1.0;         // negative: resolved per grid inside the solver
  double tol = 1e-8;
  long max_iter = -1;            // negative: per-method default
  std::string init = "default";  // default | poisson | poisson-convexify | given
  std::string init_file;         // node values for --init given
  int coarse_init_factor = 1;
  std::string output;            // empty: stdout
  std::string format = "default";  // json | csv; default is per subcommand
  std::string dump_solution;     // optional path for the solved node values
};

/// Thrown for invalid flag combinations; the front end prints the message
/// followed by usage text and exits nonzero.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed-width decimal formatting used for every CSV number: 17 significant
/// digits, enough for the printed string to parse back to the same double.
std::string format_float(double value);

/// Resolve an example name against the catalog: exact match first, then the
/// name with a dimension suffix appended (so "--dim 2 --example c2" finds
/// c2_2d). dim 0 means unspecified: exact names keep their own dimension and
/// unsuffixed names resolve to 2D. An explicit dim rejects a match whose
/// dimension contradicts it.
const Problem& resolve_example(const std::string& name, int dim);

SolveMethod parse_method(const std::string& name);
SchemeKind parse_scheme(const std::string& name);

/// Per-method iteration budgets used when max_iter is left negative: Newton
/// converges in a handful of steps, the explicit march needs O(n^2 / h^2)
/// updates, the semi-implicit iteration sits in between.
long default_max_iter(SolveMethod method);

/// Single solve: writes the JSON report (config echo, iterations, residual
/// and damping histories, wall seconds, max error, converged flag). Returns
/// the process exit code: 0 when converged, 1 otherwise.
int run_solve(const RunRequest& request);

/// Convergence study over the n-list x stencil-list product. Writes CSV
/// with columns n,stencil,max_error,iterations,seconds,converged; a failed
/// cell is recorded in-row (converged 0, max_error nan) and the sweep
/// continues. Exit code 0 iff every cell converged.
int run_study(const RunRequest& request);

/// Runs each requested method on the same problem and grid and writes one
/// JSON report per method under "runs". Exit code 0 iff all converged.
int run_compare(const RunRequest& request);

/// Solves, then writes the discrete gradient map as CSV rows x,y,dx_u,dy_u:
/// first every interior node (centered first differences), then 256 points
/// sampling the image of the circle inscribed in the unit square (gradient
/// field extended to the boundary by one-sided differences and interpolated
/// bilinearly). 2D only. Exit code 0 when the solve converged.
int export_gradient_map(const RunRequest& request);

/// Dispatch on request.subcommand. Unknown subcommands raise UsageError.
int run_request(const RunRequest& request);

}  // namespace mafd
