// amdg run|converge|project --config <path> [--override key=value ...]

#include "amdg/problems.hpp"
#include "amdg/runner.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>

namespace
{
amdg::RunConfig load(std::string const &path, std::vector<std::string> const &overrides)
{
  amdg::RunConfig config = path.empty() ? amdg::RunConfig{} : amdg::load_run_config(path);
  for (auto const &o : overrides)
    amdg::apply_override(config, o);
  return config;
}

void print_result(amdg::RunResult const &r)
{
  std::cout << std::setprecision(6) << "t = " << r.time << ", steps = " << r.steps << ", dof = " << r.table.dof()
            << " (" << r.table.size() << " elements)\n";
  if (r.error)
    std::cout << "error: L1 " << r.error->l1 << ", L2 " << r.error->l2 << ", Linf " << r.error->linf << '\n';
  std::cout << "relative mass drift (max over steps): " << r.max_mass_drift << '\n';
}
} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Adaptive multiresolution DG solver"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<double> epsilons;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--override", overrides, "key=value, applied after the file");
  };
  auto *run      = app.add_subcommand("run", "evolve a problem to T and write CSV output");
  auto *converge = app.add_subcommand("converge", "run a sequence of thresholds and fit R_eps and R_DOF");
  auto *project  = app.add_subcommand("project", "adaptive projection of the initial state only");
  auto *list     = app.add_subcommand("problems", "list the registered problems");
  add_common(run);
  add_common(converge);
  add_common(project);
  converge->add_option("--epsilons", epsilons, "strictly decreasing thresholds")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (list->parsed())
    {
      for (auto const &n : amdg::problem_names())
        std::cout << n << '\n';
      return 0;
    }
    amdg::RunConfig const config = load(config_path, overrides);
    if (run->parsed())
      print_result(amdg::run_problem(config));
    else if (converge->parsed())
    {
      if (epsilons.empty())
        epsilons = {config.epsilon, config.epsilon / 10, config.epsilon / 100};
      auto const rows = amdg::run_convergence_study(config, epsilons);
      std::cout << std::setw(10) << "epsilon" << std::setw(10) << "DOF" << std::setw(13) << "L2 error"
                << std::setw(8) << "R_DOF" << std::setw(8) << "R_eps" << '\n';
      for (auto const &r : rows)
        std::cout << std::setprecision(3) << std::setw(10) << r.epsilon << std::setw(10) << r.dof_coeffs
                  << std::setw(13) << r.l2_error << std::setw(8) << r.r_dof << std::setw(8) << r.r_eps << '\n';
    }
    else if (project->parsed())
    {
      auto const table = amdg::run_projection(config);
      std::cout << "dof = " << table.dof() << " (" << table.size() << " elements)\n";
    }
  }
  catch (std::exception const &e)
  {
    std::cerr << "amdg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
