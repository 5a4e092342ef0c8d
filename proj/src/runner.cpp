#include "amdg/runner.hpp"
#include "amdg/problems.hpp"
#include "amdg/time_stepper.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace amdg
{

using nlohmann::json;

RunMode parse_mode(std::string const &name)
{
  if (name == "adaptive")
    return RunMode::adaptive;
  if (name == "fixed-sparse")
    return RunMode::fixed_sparse;
  if (name == "fixed-full")
    return RunMode::fixed_full;
  throw std::invalid_argument("unknown mode '" + name + "' (adaptive, fixed-sparse, fixed-full)");
}

std::string to_string(RunMode m)
{
  switch (m)
  {
  case RunMode::adaptive: return "adaptive";
  case RunMode::fixed_sparse: return "fixed-sparse";
  case RunMode::fixed_full: return "fixed-full";
  }
  return "adaptive";
}

ThresholdConfig RunConfig::thresholds() const { return ThresholdConfig{epsilon, eta_value(), norm, N, k}; }

void RunConfig::validate() const
{
  auto fail = [](std::string const &msg) { throw std::invalid_argument(msg); };
  bool known = false;
  for (auto const &n : problem_names())
    known = known || n == problem;
  if (!known)
    fail("unknown problem '" + problem + "'");
  if (d < 1 || d > max_dim)
    fail("d must be in 1.." + std::to_string(max_dim));
  if (is_vlasov_problem(problem) && d != 2)
    fail("Vlasov-Poisson problems run in 1D1V phase space: d must be 2");
  if (k < 0 || k > Basis1D::max_degree)
    fail("k must be in 0.." + std::to_string(Basis1D::max_degree));
  if (N < 1 || N > 15)
    fail("N must be in 1..15");
  if (!(cfl > 0) || cfl > 1)
    fail("cfl must be in (0, 1]");
  if (!(T >= 0) || !std::isfinite(T))
    fail("T must be a finite non-negative time");
  if (output_stride < 0)
    fail("output_stride must be non-negative");
  if (!(eps_scale > 0))
    fail("eps_scale must be positive");
  if (flux != "auto")
    parse_flux(flux);
  thresholds().validate();
}

namespace
{
json config_json(RunConfig const &c)
{
  return json{{"problem", c.problem},
              {"d", c.d},
              {"k", c.k},
              {"N", c.N},
              {"epsilon", c.epsilon},
              {"eta", c.eta_value()},
              {"norm", to_string(c.norm)},
              {"cfl", c.cfl},
              {"flux", c.flux},
              {"T", c.T},
              {"output_stride", c.output_stride},
              {"output_dir", c.output_dir},
              {"mode", to_string(c.mode)},
              {"eps_scale", c.eps_scale},
              {"refresh_every_stage", c.refresh_every_stage}};
}

RunConfig config_from_json(json const &j)
{
  if (!j.is_object())
    throw std::invalid_argument("configuration must be a JSON object");
  RunConfig c;
  for (auto const &[key, value] : j.items())
  {
    try
    {
      if (key == "problem")
        c.problem = value.get<std::string>();
      else if (key == "d")
        c.d = value.get<int>();
      else if (key == "k")
        c.k = value.get<int>();
      else if (key == "N")
        c.N = value.get<int>();
      else if (key == "epsilon")
        c.epsilon = value.get<double>();
      else if (key == "eta")
        c.eta = value.get<double>();
      else if (key == "norm")
        c.norm = parse_norm(value.get<std::string>());
      else if (key == "cfl")
        c.cfl = value.get<double>();
      else if (key == "flux")
        c.flux = value.get<std::string>();
      else if (key == "T")
        c.T = value.get<double>();
      else if (key == "output_stride")
        c.output_stride = value.get<int>();
      else if (key == "output_dir")
        c.output_dir = value.get<std::string>();
      else if (key == "mode")
        c.mode = parse_mode(value.get<std::string>());
      else if (key == "eps_scale")
        c.eps_scale = value.get<double>();
      else if (key == "refresh_every_stage")
        c.refresh_every_stage = value.get<bool>();
      else
        throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
    catch (json::exception const &e)
    {
      throw std::invalid_argument("bad value for '" + key + "': " + e.what());
    }
  }
  if (j.contains("eta") && !(c.eta > 0))
    throw std::invalid_argument("eta must be positive");
  c.validate();
  return c;
}
} // namespace

RunConfig parse_run_config(std::string const &json_text)
{
  json j;
  try
  {
    j = json::parse(json_text);
  }
  catch (json::parse_error const &e)
  {
    throw std::invalid_argument(std::string("configuration is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig load_run_config(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_json(RunConfig const &config) { return config_json(config).dump(2); }

void apply_override(RunConfig &config, std::string const &assignment)
{
  auto const eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must look like key=value: '" + assignment + "'");
  std::string const key  = assignment.substr(0, eq);
  std::string const text = assignment.substr(eq + 1);
  json value             = json::parse(text, nullptr, false);
  if (value.is_discarded())
    value = text;
  json j = config_json(config);
  // an explicit eta would otherwise pin the old epsilon / 10
  if (config.eta <= 0)
    j.erase("eta");
  j[key] = value;
  config = config_from_json(j);
}

namespace
{
void write_csv_file(std::string const &path, auto &&body)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(17);
  body(out);
}

std::filesystem::path output_path(RunConfig const &c, std::string const &file)
{
  return std::filesystem::path(c.output_dir) / file;
}

void write_state(ElementTable const &table, Basis1D const &basis, Box const &box, RunConfig const &c, int step)
{
  std::string const tag = std::to_string(step);
  if (table.dim() <= 2)
    write_snapshot(table, basis, box, output_path(c, "snapshot_" + tag + ".csv").string());
  write_csv_file(output_path(c, "elements_" + tag + ".csv").string(), [&](std::ostream &os) { table.write_csv(os); });
  write_percentage(table, output_path(c, "percentage_" + tag + ".csv").string());
}

ElementTable initial_table(ScalarFunction const &u0, RunConfig const &c, Basis1D const &basis, Box const &box)
{
  if (c.mode == RunMode::adaptive)
    return adaptive_project(u0, c.thresholds(), basis, box);
  return project_onto(u0, enumerate_keys(c.d, c.N, c.mode == RunMode::fixed_full), c.N, basis, box);
}

struct Setup
{
  Box box;
  ScalarFunction initial;
  std::function<ScalarFunction(double)> exact_at;
  std::unique_ptr<SemiDiscrete> system;
  VlasovSystem *vlasov = nullptr;
};

Setup make_setup(RunConfig const &c, Basis1D const &basis)
{
  Setup s;
  if (is_vlasov_problem(c.problem))
  {
    VpProblem p = vp_problem(vlasov_initial_name(c.problem), c.eps_scale);
    s.box       = p.box;
    s.initial   = p.initial;
    FluxKind const flux = c.flux == "auto" ? FluxKind::upwind : parse_flux(c.flux);
    auto sys            = std::make_unique<VlasovSystem>(basis, std::move(p), c.N, flux);
    sys->set_refresh_every_stage(c.refresh_every_stage);
    s.vlasov = sys.get();
    s.system = std::move(sys);
    return s;
  }
  TransportProblem p = transport_problem(c.problem, c.d);
  s.box              = p.box;
  s.initial          = p.initial;
  s.exact_at         = p.exact_at;
  FluxKind const flux = c.flux == "auto" ? p.default_flux : parse_flux(c.flux);
  s.system = std::make_unique<TransportSystem>(basis, DgOperator(basis, p.box, p.boundaries, c.N, p.field, flux));
  return s;
}

void check_finite(ElementTable const &table, double t)
{
  if (!std::isfinite(table.squared_norm()))
    throw std::runtime_error("solution became non-finite at t = " + std::to_string(t));
}
} // namespace

ElementTable run_projection(RunConfig const &config, bool write_outputs)
{
  config.validate();
  Basis1D const basis(config.k);
  Setup const s = make_setup(config, basis);
  ElementTable table = initial_table(s.initial, config, basis, s.box);
  if (write_outputs)
  {
    std::filesystem::create_directories(config.output_dir);
    write_state(table, basis, s.box, config, 0);
  }
  return table;
}

RunResult run_problem(RunConfig const &config, bool write_outputs)
{
  config.validate();
  Basis1D const basis(config.k);
  Setup s = make_setup(config, basis);
  RunResult result(initial_table(s.initial, config, basis, s.box));
  ElementTable &table = result.table;
  StepConfig step;
  step.cfl        = config.cfl;
  step.thresholds = config.thresholds();
  step.adaptive   = config.mode == RunMode::adaptive;

  std::ofstream diag;
  if (write_outputs)
  {
    std::filesystem::create_directories(config.output_dir);
    diag.open(output_path(config, "diagnostics.csv"));
    if (!diag)
      throw std::runtime_error("cannot write diagnostics.csv in '" + config.output_dir + "'");
    diag << std::setprecision(17);
    diag << (s.vlasov ? "t,dof,mass,momentum,enstrophy,energy\n"
                      : "t,dof_coeffs,dof_elems,mass,l1_error,l2_error,linf_error\n");
  }

  auto transport_error = [&](double t) -> std::optional<ErrorNorms> {
    if (!s.exact_at)
      return std::nullopt;
    ScalarFunction exact = s.exact_at(t);
    if (!exact)
      return std::nullopt;
    return solution_error(table, basis, s.box, exact);
  };
  auto record = [&](double t, bool state) {
    if (s.vlasov)
    {
      result.vp.push_back(s.vlasov->diagnostics(table, t));
      if (diag.is_open())
      {
        auto const &r = result.vp.back();
        diag << r.time << ',' << r.dof << ',' << r.mass << ',' << r.momentum << ',' << r.enstrophy << ','
             << r.energy << '\n';
      }
    }
    else if (diag.is_open() && state)
    {
      auto const err = transport_error(t);
      diag << t << ',' << table.dof() << ',' << table.size() << ',' << solution_mass(table, s.box);
      if (err)
        diag << ',' << err->l1 << ',' << err->l2 << ',' << err->linf << '\n';
      else
        diag << ",,,\n";
    }
    if (write_outputs && state)
      write_state(table, basis, s.box, config, result.steps);
  };

  result.initial_mass = solution_mass(table, s.box);
  double const mass_scale = std::max(std::abs(result.initial_mass), 1e-300);
  record(0.0, true);
  double t = 0;
  double const tol = 1e-12 * std::max(1.0, config.T);
  while (t < config.T - tol)
  {
    auto const stats = evolve_step(table, *s.system, step, t, config.T - t);
    t += stats.dt;
    ++result.steps;
    check_finite(table, t);
    result.max_mass_drift =
        std::max(result.max_mass_drift, std::abs(solution_mass(table, s.box) - result.initial_mass) / mass_scale);
    bool const last  = !(t < config.T - tol);
    bool const state = last || (config.output_stride > 0 && result.steps % config.output_stride == 0);
    // Vlasov-Poisson diagnostics go out every step unless a stride is set
    if (state || (s.vlasov && config.output_stride == 0))
      record(t, state);
  }
  result.time  = t;
  result.mass  = solution_mass(table, s.box);
  result.error = transport_error(t);
  return result;
}

void compute_rates(std::vector<ConvergenceRow> &rows)
{
  for (std::size_t l = 0; l < rows.size(); ++l)
  {
    rows[l].r_dof = rows[l].r_eps = 0;
    if (l == 0 || rows[l - 1].l2_error == rows[l].l2_error)
      continue;
    double const ratio = std::log(rows[l - 1].l2_error / rows[l].l2_error);
    rows[l].r_eps      = ratio / std::log(rows[l - 1].epsilon / rows[l].epsilon);
    rows[l].r_dof      = ratio / std::log(static_cast<double>(rows[l].dof_coeffs) / rows[l - 1].dof_coeffs);
  }
}

std::vector<ConvergenceRow> run_convergence_study(RunConfig const &base, std::vector<double> const &epsilons,
                                                  bool write_outputs)
{
  if (epsilons.empty())
    throw std::invalid_argument("convergence study needs at least one epsilon");
  for (std::size_t l = 1; l < epsilons.size(); ++l)
    if (!(epsilons[l] < epsilons[l - 1]))
      throw std::invalid_argument("epsilon list must be strictly decreasing");
  std::vector<ConvergenceRow> rows;
  for (std::size_t l = 0; l < epsilons.size(); ++l)
  {
    RunConfig c = base;
    c.epsilon   = epsilons[l];
    c.eta       = base.eta > 0 ? epsilons[l] * base.eta / base.epsilon : 0;
    c.output_dir = (std::filesystem::path(base.output_dir) / ("run_" + std::to_string(l))).string();
    RunResult const r = run_problem(c, write_outputs);
    if (!r.error)
      throw std::invalid_argument("problem '" + base.problem + "' has no exact solution at T");
    rows.push_back({epsilons[l], r.table.dof(), r.table.size(), r.error->l2, 0, 0});
  }
  compute_rates(rows);
  if (write_outputs)
  {
    std::filesystem::create_directories(base.output_dir);
    write_convergence(rows, output_path(base, "convergence.csv").string());
  }
  return rows;
}

std::map<std::vector<int>, double> active_percentage(ElementTable const &table)
{
  int const d = table.dim(), N = table.max_level();
  std::map<std::vector<int>, std::size_t> counts;
  for (auto const &[key, elem] : table)
  {
    std::vector<int> l(key.level.begin(), key.level.begin() + d);
    ++counts[l];
  }
  std::map<std::vector<int>, double> out;
  std::vector<int> l(d, 0);
  while (true)
  {
    double possible = 1;
    for (int m = 0; m < d; ++m)
      possible *= cells_at_level(l[m]);
    auto const it = counts.find(l);
    out[l]        = it == counts.end() ? 0.0 : static_cast<double>(it->second) / possible;
    int m = d - 1;
    while (m >= 0 && l[m] == N)
      l[m--] = 0;
    if (m < 0)
      break;
    ++l[m];
  }
  return out;
}

void write_snapshot(ElementTable const &table, Basis1D const &basis, Box const &box, std::string const &path)
{
  int const d = table.dim();
  if (d > 2)
    throw std::invalid_argument("snapshots are written for d <= 2 only");
  auto const grid   = TensorGrid::centers(d, table.max_level());
  auto const values = evaluate_on_grid(table, basis, box, grid);
  int const n       = grid.points_per_dim();
  write_csv_file(path, [&](std::ostream &os) {
    os << (d == 1 ? "x1,value\n" : "x1,x2,value\n");
    for (std::size_t p = 0; p < values.size(); ++p)
    {
      if (d == 1)
        os << box.to_physical(0, grid.reference(static_cast<int>(p)));
      else
        os << box.to_physical(0, grid.reference(static_cast<int>(p) / n)) << ','
           << box.to_physical(1, grid.reference(static_cast<int>(p) % n));
      os << ',' << values[p] << '\n';
    }
  });
}

void write_percentage(ElementTable const &table, std::string const &path)
{
  auto const pct = active_percentage(table);
  write_csv_file(path, [&](std::ostream &os) {
    for (int m = 0; m < table.dim(); ++m)
      os << 'l' << m + 1 << ',';
    os << "fraction\n";
    for (auto const &[l, f] : pct)
    {
      for (int v : l)
        os << v << ',';
      os << f << '\n';
    }
  });
}

void write_convergence(std::vector<ConvergenceRow> const &rows, std::string const &path)
{
  write_csv_file(path, [&](std::ostream &os) {
    os << "epsilon,dof_coeffs,dof_elems,l2_error,r_dof,r_eps\n";
    for (auto const &r : rows)
      os << r.epsilon << ',' << r.dof_coeffs << ',' << r.dof_elems << ',' << r.l2_error << ',' << r.r_dof << ','
         << r.r_eps << '\n';
  });
}

} // namespace amdg
