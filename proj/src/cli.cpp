#include "mafd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mafd/stencil.hpp"

namespace mafd {
namespace {

using nlohmann::json;

constexpr int kCircleSamples = 256;

std::string method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::newton: return "newton";
    case SolveMethod::explicit_euler: return "explicit";
    case SolveMethod::semi_implicit: return "semi-implicit";
  }
  return "?";
}

std::string scheme_name(SchemeKind s) {
  return s == SchemeKind::monotone ? "monotone" : "regularized";
}

std::string init_name(InitKind k) {
  switch (k) {
    case InitKind::poisson: return "poisson";
    case InitKind::poisson_convexify: return "poisson-convexify";
    case InitKind::given: return "given";
  }
  return "?";
}

int default_stencil(int dim) { return dim == 2 ? 17 : 19; }

void write_text(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << body;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

std::vector<double> load_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open init file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw UsageError("non-numeric data in init file: " + path);
  return values;
}

void dump_values(const std::string& path, const GridFunction& u) {
  std::ostringstream body;
  for (double v : u.values) body << format_float(v) << "\n";
  write_text(path, body.str());
}

// Everything needed to run one (n, stencil, method) cell, resolved from the
// request once and reused across study cells.
struct CellSetup {
  const Problem* problem = nullptr;
  SchemeKind scheme = SchemeKind::monotone;
  double delta = 1e-2;
  double epsilon = -1.0;
  double tol = 1e-8;
  long max_iter = -1;  // still per-method at this point
  InitKind init = InitKind::poisson;
  int coarse_init_factor = 1;
  std::vector<double> given_values;  // loaded init file, if any
};

CellSetup make_setup(const RunRequest& req) {
  if (req.dim != 0 && req.dim != 2 && req.dim != 3)
    throw UsageError("--dim must be 2 or 3");
  if (req.example.empty()) throw UsageError("--example is required");

  CellSetup s;
  s.problem = &resolve_example(req.example, req.dim);
  s.scheme = req.scheme;
  s.delta = req.delta;
  s.epsilon = req.epsilon;
  s.tol = req.tol;
  s.max_iter = req.max_iter;
  s.coarse_init_factor = req.coarse_init_factor;

  if (req.init == "default") {
    s.init = s.problem->needs_convexify ? InitKind::poisson_convexify
                                        : InitKind::poisson;
  } else if (req.init == "poisson") {
    s.init = InitKind::poisson;
  } else if (req.init == "poisson-convexify") {
    s.init = InitKind::poisson_convexify;
  } else if (req.init == "given") {
    s.init = InitKind::given;
    if (req.init_file.empty())
      throw UsageError("--init given requires --init-file");
    s.given_values = load_values(req.init_file);
  } else {
    throw UsageError("unknown --init value: " + req.init);
  }
  if (s.init != InitKind::given && !req.init_file.empty())
    throw UsageError("--init-file only applies with --init given");

  if (s.tol <= 0.0) throw UsageError("--tol must be positive");
  if (s.delta <= 0.0) throw UsageError("--delta must be positive");
  return s;
}

void check_n(const CellSetup& s, int n) {
  if (n < 3) throw UsageError("--n must be at least 3");
  if (s.problem->requires_odd_n && n % 2 == 0)
    throw UsageError("example " + s.problem->name +
                     " needs the center node: --n must be odd");
}

void check_stencil(int dim, int points) {
  if (dim == 2 && (points == 9 || points == 17 || points == 33)) return;
  if (dim == 3 && points == 19) return;
  throw UsageError("--stencil " + std::to_string(points) +
                   " is not available in " + std::to_string(dim) + "D");
}

void check_method(const CellSetup& s, SolveMethod method) {
  if (method == SolveMethod::semi_implicit && s.problem->dim != 2)
    throw UsageError("the semi-implicit solver is 2D only");
  if (method != SolveMethod::newton && s.scheme == SchemeKind::regularized)
    throw UsageError("--scheme regularized is solved by Newton only");
}

SolverConfig cell_config(const CellSetup& s, SolveMethod method,
                         const GridFunction* guess) {
  SolverConfig cfg;
  cfg.method = method;
  cfg.scheme = s.scheme;
  cfg.tol = s.tol;
  cfg.max_iter = s.max_iter >= 0 ? s.max_iter : default_max_iter(method);
  cfg.delta = s.delta;
  cfg.epsilon = s.epsilon;
  cfg.init = s.init;
  cfg.coarse_init_factor = s.coarse_init_factor;
  cfg.initial_guess = guess;
  return cfg;
}

SolveOutcome solve_cell(const CellSetup& s, int n, int stencil_points,
                        SolveMethod method) {
  check_n(s, n);
  check_stencil(s.problem->dim, stencil_points);
  check_method(s, method);

  const UniformGrid grid = create_grid(s.problem->dim, n);

  GridFunction guess{grid, {}};
  const GridFunction* guess_ptr = nullptr;
  if (s.init == InitKind::given) {
    if (s.given_values.size() != static_cast<size_t>(grid.num_nodes()))
      throw UsageError("init file holds " +
                       std::to_string(s.given_values.size()) +
                       " values; the grid has " +
                       std::to_string(grid.num_nodes()) + " nodes");
    guess.values = s.given_values;
    guess_ptr = &guess;
  }

  const SolverConfig cfg = cell_config(s, method, guess_ptr);
  if (method == SolveMethod::semi_implicit)
    return semi_implicit_solve_2d(*s.problem, grid, cfg);
  const StencilSet stencil = make_stencil_by_points(s.problem->dim, stencil_points);
  if (method == SolveMethod::newton)
    return newton_solve(*s.problem, grid, stencil, cfg);
  return explicit_solve(*s.problem, grid, stencil, cfg);
}

json report_json(const CellSetup& s, int n, int stencil_points,
                 SolveMethod method, const SolveOutcome& out) {
  json config = {
      {"example", s.problem->name},
      {"dim", s.problem->dim},
      {"n", n},
      {"stencil", stencil_points},
      {"method", method_name(method)},
      {"scheme", scheme_name(s.scheme)},
      {"delta", s.delta},
      {"epsilon", s.epsilon},
      {"tol", s.tol},
      {"max_iter", s.max_iter >= 0 ? s.max_iter : default_max_iter(method)},
      {"init", init_name(s.init)},
      {"coarse_init_factor", s.coarse_init_factor},
  };
  return json{
      {"config", std::move(config)},
      {"iterations", out.report.iterations},
      {"residual_history", out.report.residual_history},
      {"damping_history", out.report.damping_history},
      {"seconds", out.report.seconds},
      {"max_error", max_error(out.solution, *s.problem)},
      {"converged", out.report.converged},
  };
}

SolveMethod single_method(const RunRequest& req) {
  if (req.methods.size() > 1)
    throw UsageError("multiple --solver values only apply to compare");
  return req.methods.empty() ? SolveMethod::newton
                             : parse_method(req.methods.front());
}

int single_n(const RunRequest& req) {
  if (req.n_values.size() != 1)
    throw UsageError("expected exactly one --n for this subcommand");
  return req.n_values.front();
}

int single_stencil(const RunRequest& req, int dim) {
  if (req.stencils.size() > 1)
    throw UsageError("multiple --stencil values only apply to study");
  return req.stencils.empty() ? default_stencil(dim) : req.stencils.front();
}

void check_format(const RunRequest& req, const char* natural) {
  if (req.format == "default" || req.format == natural) return;
  throw UsageError("subcommand " + req.subcommand + " writes " + natural +
                   " output only");
}

}  // namespace

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

const Problem& resolve_example(const std::string& name, int dim) {
  // dim 0 (no explicit --dim): exact names carry their own dimension and
  // unsuffixed names fall back to 2D.
  std::vector<std::string> candidates{name};
  if (dim != 3) candidates.push_back(name + "_2d");
  if (dim != 2) candidates.push_back(name + "_3d");
  for (const std::string& candidate : candidates) {
    for (const std::string& known : problem_names()) {
      if (known != candidate) continue;
      const Problem& p = lookup_problem(candidate);
      if (dim != 0 && p.dim != dim)
        throw UsageError("example " + p.name + " is " +
                         std::to_string(p.dim) + "D, not " +
                         std::to_string(dim) + "D");
      return p;
    }
  }
  std::string known;
  for (const std::string& p : problem_names()) known += " " + p;
  throw UsageError("unknown example \"" + name + "\"; available:" + known);
}

SolveMethod parse_method(const std::string& name) {
  if (name == "newton") return SolveMethod::newton;
  if (name == "explicit") return SolveMethod::explicit_euler;
  if (name == "semi-implicit") return SolveMethod::semi_implicit;
  throw UsageError("unknown --solver value: " + name);
}

SchemeKind parse_scheme(const std::string& name) {
  if (name == "monotone") return SchemeKind::monotone;
  if (name == "regularized") return SchemeKind::regularized;
  throw UsageError("unknown --scheme value: " + name);
}

long default_max_iter(SolveMethod method) {
  switch (method) {
    case SolveMethod::newton: return 100;
    case SolveMethod::explicit_euler: return 2000000;
    case SolveMethod::semi_implicit: return 10000;
  }
  return 100;
}

int run_solve(const RunRequest& req) {
  check_format(req, "json");
  const CellSetup setup = make_setup(req);
  const SolveMethod method = single_method(req);
  const int n = single_n(req);
  const int points = single_stencil(req, setup.problem->dim);

  const SolveOutcome out = solve_cell(setup, n, points, method);
  write_text(req.output, report_json(setup, n, points, method, out).dump(2) + "\n");
  if (!req.dump_solution.empty()) dump_values(req.dump_solution, out.solution);
  return out.report.converged ? 0 : 1;
}

int run_study(const RunRequest& req) {
  check_format(req, "csv");
  const CellSetup setup = make_setup(req);
  const SolveMethod method = single_method(req);
  if (setup.init == InitKind::given)
    throw UsageError("--init given needs a single grid; use solve");
  if (req.n_values.empty()) throw UsageError("study needs at least one --n");
  std::vector<int> points = req.stencils;
  if (points.empty()) points.push_back(default_stencil(setup.problem->dim));

  // Validate the whole product up front so a bad flag fails fast instead of
  // surfacing as a mid-study cell failure.
  for (int n : req.n_values) check_n(setup, n);
  for (int p : points) check_stencil(setup.problem->dim, p);
  check_method(setup, method);

  std::ostringstream csv;
  csv << "n,stencil,max_error,iterations,seconds,converged\n";
  bool all_converged = true;
  for (int n : req.n_values) {
    for (int p : points) {
      std::string err_text = "nan";
      long iterations = 0;
      double seconds = 0.0;
      bool converged = false;
      try {
        const SolveOutcome out = solve_cell(setup, n, p, method);
        err_text = format_float(max_error(out.solution, *setup.problem));
        iterations = out.report.iterations;
        seconds = out.report.seconds;
        converged = out.report.converged;
      } catch (const LinearSolveFailure&) {
        // recorded in-row below; the sweep continues
      }
      all_converged = all_converged && converged;
      csv << n << "," << p << "," << err_text << "," << iterations << ","
          << format_float(seconds) << "," << (converged ? 1 : 0) << "\n";
    }
  }
  write_text(req.output, csv.str());
  return all_converged ? 0 : 1;
}

int run_compare(const RunRequest& req) {
  check_format(req, "json");
  const CellSetup setup = make_setup(req);
  const int n = single_n(req);
  const int points = single_stencil(req, setup.problem->dim);
  if (req.methods.empty())
    throw UsageError("compare needs at least one --solver");

  json runs = json::array();
  bool all_converged = true;
  for (const std::string& name : req.methods) {
    const SolveMethod method = parse_method(name);
    const SolveOutcome out = solve_cell(setup, n, points, method);
    all_converged = all_converged && out.report.converged;
    runs.push_back(report_json(setup, n, points, method, out));
  }
  write_text(req.output, json{{"runs", std::move(runs)}}.dump(2) + "\n");
  return all_converged ? 0 : 1;
}

int export_gradient_map(const RunRequest& req) {
  check_format(req, "csv");
  const CellSetup setup = make_setup(req);
  if (setup.problem->dim != 2)
    throw UsageError("gradient-map is 2D only");
  const SolveMethod method = single_method(req);
  const int n = single_n(req);
  const int points = single_stencil(req, 2);

  const SolveOutcome out = solve_cell(setup, n, points, method);
  const GridFunction& u = out.solution;
  const UniformGrid& grid = u.grid;
  const double h = grid.h;

  // Gradient on every node: centered differences inside, second-order
  // one-sided at the faces so the field is interpolable up to the boundary.
  GridFunction gx{grid, std::vector<double>(grid.num_nodes(), 0.0)};
  GridFunction gy = gx;
  auto one_axis = [&](const Index& idx, int axis) {
    const int i = idx[axis];
    Index a = idx, b = idx;
    if (i == 0) {
      a[axis] = 1;
      b[axis] = 2;
      return (-3.0 * u.at(idx) + 4.0 * u.at(a) - u.at(b)) / (2.0 * h);
    }
    if (i == grid.n - 1) {
      a[axis] = i - 1;
      b[axis] = i - 2;
      return (3.0 * u.at(idx) - 4.0 * u.at(a) + u.at(b)) / (2.0 * h);
    }
    a[axis] = i + 1;
    b[axis] = i - 1;
    return (u.at(a) - u.at(b)) / (2.0 * h);
  };
  for (std::int64_t lin = 0; lin < grid.num_nodes(); ++lin) {
    const Index idx = grid.multi_index(lin);
    gx.values[lin] = one_axis(idx, 0);
    gy.values[lin] = one_axis(idx, 1);
  }

  std::ostringstream csv;
  csv << "x,y,dx_u,dy_u\n";
  for (std::int64_t k = 0; k < grid.num_interior(); ++k) {
    const Index idx = grid.interior_multi_index(k);
    const std::int64_t lin = grid.linear_index(idx);
    const Point p = grid.coords(idx);
    csv << format_float(p[0]) << "," << format_float(p[1]) << ","
        << format_float(gx.values[lin]) << "," << format_float(gy.values[lin])
        << "\n";
  }
  for (int k = 0; k < kCircleSamples; ++k) {
    const double theta = 2.0 * M_PI * k / kCircleSamples;
    const Point p{0.5 + 0.5 * std::cos(theta), 0.5 + 0.5 * std::sin(theta), 0.0};
    csv << format_float(p[0]) << "," << format_float(p[1]) << ","
        << format_float(eval_multilinear(gx, p)) << ","
        << format_float(eval_multilinear(gy, p)) << "\n";
  }
  write_text(req.output, csv.str());
  if (!req.dump_solution.empty()) dump_values(req.dump_solution, u);
  return out.report.converged ? 0 : 1;
}

int run_request(const RunRequest& req) {
  if (req.subcommand == "solve") return run_solve(req);
  if (req.subcommand == "study") return run_study(req);
  if (req.subcommand == "compare") return run_compare(req);
  if (req.subcommand == "gradient-map") return export_gradient_map(req);
  throw UsageError("unknown subcommand: " + req.subcommand);
}

}  // namespace mafd
