#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace maxent::cli;

  CLI::App app{"Maximum-entropy densities, utilities and risk-aversion profiles"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  std::string solve_spec;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "Solve a problem-spec file and emit summary + x,u,U,gamma table");
  solve->add_option("spec", solve_spec, "Problem-spec file")->required();
  solve->add_option("--tol", solve_flags.tol, "Residual tolerance");
  solve->add_option("--max-iter", solve_flags.max_iter, "Newton iteration limit");
  solve->add_option("--nodes", solve_flags.nodes, "Quadrature nodes (multiple of 16)");
  solve->add_flag("--base2", solve_flags.base2, "Report entropy in bits");
  solve->add_option("--out", solve_out, "Write the table to this CSV file");
  solve->add_flag("--quiet", solve_flags.quiet, "Suppress the summary");

  EntropyFlags entropy_flags;
  std::string entropy_spec;
  auto* entropy = app.add_subcommand("entropy", "Entropy of masses or of a density spec");
  entropy->add_option("spec", entropy_spec, "Spec file with masses, density or density_table");
  entropy->add_option("--masses", entropy_flags.masses, "Probability masses")->delimiter(',');
  entropy->add_option("--nodes", entropy_flags.nodes, "Quadrature nodes (multiple of 16)");
  entropy->add_flag("--base2", entropy_flags.base2, "Report entropy in bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (solve->parsed()) {
    if (!solve_out.empty()) solve_flags.out = solve_out;
    return cmd_solve(solve_spec, solve_flags, std::cout, std::cerr);
  }
  if (!entropy_spec.empty()) entropy_flags.spec = entropy_spec;
  return cmd_entropy(entropy_flags, std::cout, std::cerr);
}
