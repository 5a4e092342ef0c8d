#pragma once

#include "amdg/basis.hpp"
#include "amdg/element_table.hpp"
#include "amdg/grid_eval.hpp"
#include "amdg/projection.hpp"
#include "amdg/vlasov_poisson.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace amdg
{

enum class RunMode
{
  adaptive,
  fixed_sparse,  // |l|_1 <= N, no refinement or coarsening
  fixed_full     // |l|_inf <= N
};

RunMode parse_mode(std::string const &name);
std::string to_string(RunMode m);

struct RunConfig
{
  std::string problem = "linear_smooth";
  int d               = 2;
  int k               = 2;
  int N               = 7;
  double epsilon      = 1e-4;
  double eta          = 0;  // 0 means epsilon / 10
  NormChoice norm     = NormChoice::l2;
  double cfl          = 0.1;
  std::string flux    = "auto";
  double T            = 1.0;
  int output_stride   = 0;  // 0: initial and final state only
  std::string output_dir = "output";
  RunMode mode           = RunMode::adaptive;
  // Vlasov-Poisson only
  double eps_scale         = 0.05;
  bool refresh_every_stage = true;

  double eta_value() const { return eta > 0 ? eta : epsilon / 10; }
  ThresholdConfig thresholds() const;
  void validate() const;
};

// JSON object with RunConfig keys; unknown keys and bad values throw.
RunConfig parse_run_config(std::string const &json_text);
RunConfig load_run_config(std::string const &path);
std::string to_json(RunConfig const &config);
// "key=value", value parsed as JSON when possible and as a string otherwise
void apply_override(RunConfig &config, std::string const &assignment);

struct RunResult
{
  explicit RunResult(ElementTable t) : table(std::move(t)) {}

  ElementTable table;
  double time = 0;
  int steps   = 0;
  std::optional<ErrorNorms> error;  // against the exact solution when known
  double initial_mass = 0;
  double mass         = 0;
  double max_mass_drift = 0;  // max relative mass change over the run
  std::vector<Diagnostics> vp;  // Vlasov-Poisson problems only
};

/// Projects the initial state, evolves to T and writes the CSV outputs when
/// `write_outputs` is set.
RunResult run_problem(RunConfig const &config, bool write_outputs = true);

/// Initial projection only.
ElementTable run_projection(RunConfig const &config, bool write_outputs = true);

struct ConvergenceRow
{
  double epsilon         = 0;
  std::size_t dof_coeffs = 0;
  std::size_t dof_elems  = 0;
  double l2_error        = 0;
  double r_dof           = 0;  // 0 in the first row
  double r_eps           = 0;
};

// fills r_dof and r_eps from consecutive rows
void compute_rates(std::vector<ConvergenceRow> &rows);

std::vector<ConvergenceRow> run_convergence_study(RunConfig const &base, std::vector<double> const &epsilons,
                                                  bool write_outputs = true);

// fraction of the possible elements active per level vector, |l|_inf <= N
std::map<std::vector<int>, double> active_percentage(ElementTable const &table);

void write_snapshot(ElementTable const &table, Basis1D const &basis, Box const &box, std::string const &path);
void write_percentage(ElementTable const &table, std::string const &path);
void write_convergence(std::vector<ConvergenceRow> const &rows, std::string const &path);

} // namespace amdg
