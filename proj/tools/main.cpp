#include <exception>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mafd/cli.hpp"

namespace {

// Flags shared by all four subcommands; each CLI11 subcommand gets its own
// option objects writing into the same request.
void add_common_options(CLI::App* cmd, mafd::RunRequest& req) {
  cmd->add_option("--dim", req.dim,
                  "space dimension (2 or 3; default: from the example name)");
  cmd->add_option("--example", req.example,
                  "problem name, e.g. c2, c1_2d, blowup, cone")
      ->required();
  cmd->add_option("--n", req.n_values,
                  "nodes per side (repeatable for study)")
      ->required();
  cmd->add_option("--stencil", req.stencils,
                  "stencil points: 9/17/33 in 2D, 19 in 3D "
                  "(repeatable for study)");
  cmd->add_option("--solver", req.methods,
                  "newton | explicit | semi-implicit "
                  "(repeatable for compare)");
  static const std::map<std::string, mafd::SchemeKind> schemes{
      {"monotone", mafd::SchemeKind::monotone},
      {"regularized", mafd::SchemeKind::regularized}};
  cmd->add_option("--scheme", req.scheme, "monotone | regularized")
      ->transform(CLI::CheckedTransformer(schemes));
  cmd->add_option("--delta", req.delta, "regularization width");
  cmd->add_option("--epsilon", req.epsilon,
                  "Jacobian floor; negative selects the grid default");
  cmd->add_option("--tol", req.tol, "residual stopping tolerance");
  cmd->add_option("--max-iter", req.max_iter,
                  "iteration budget; negative selects the solver default");
  cmd->add_option("--init", req.init,
                  "default | poisson | poisson-convexify | given")
      ->check(CLI::IsMember({"default", "poisson", "poisson-convexify", "given"}));
  cmd->add_option("--init-file", req.init_file,
                  "node values for --init given, one per line");
  cmd->add_option("--coarse-init-factor", req.coarse_init_factor,
                  "initial-guess grid coarsening (default 1: init on the target grid)");
  cmd->add_option("--output,-o", req.output, "output path (default stdout)");
  cmd->add_option("--format", req.format, "json | csv")
      ->check(CLI::IsMember({"default", "json", "csv"}));
  cmd->add_option("--dump-solution", req.dump_solution,
                  "also write the solved node values to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference Monge-Ampere benchmark"};
  app.require_subcommand(1);

  mafd::RunRequest req;
  const char* descriptions[][2] = {
      {"solve", "run one solve and write a JSON report"},
      {"study", "sweep n and stencil lists, write a CSV table"},
      {"compare", "run several solvers on one problem, write JSON"},
      {"gradient-map", "solve, then export the discrete gradient map as CSV"},
  };
  for (auto& d : descriptions)
    add_common_options(app.add_subcommand(d[0], d[1]), req);

  CLI11_PARSE(app, argc, argv);
  req.subcommand = app.get_subcommands().front()->get_name();

  try {
    return mafd::run_request(req);
  } catch (const mafd::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "run with --help for usage\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
