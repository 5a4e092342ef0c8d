#include "doctest.h"

#include "amdg/problems.hpp"
#include "amdg/runner.hpp"
#include "amdg/transport_operator.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <sstream>

using namespace amdg;
namespace fs = std::filesystem;

namespace
{
std::string slurp(fs::path const &p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(std::string const &name)
{
  auto const dir = fs::temp_directory_path() / ("amdg_test_" + name);
  fs::remove_all(dir);
  return dir;
}
} // namespace

TEST_CASE("configuration parsing")
{
  auto const c = parse_run_config(R"({"problem":"rotation_bell","k":1,"N":5,"epsilon":1e-3,"mode":"fixed-sparse"})");
  CHECK(c.problem == "rotation_bell");
  CHECK(c.k == 1);
  CHECK(c.N == 5);
  CHECK(c.eta_value() == doctest::Approx(1e-4));
  CHECK(c.mode == RunMode::fixed_sparse);
  CHECK_THROWS_AS(parse_run_config(R"({"problem":"linear_smooth","colour":3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"problem":"nope"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"k":"two"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"epsilon":1e-3,"eta":1e-2})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"problem":"vp_landau","d":3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("{"), std::invalid_argument);

  RunConfig o = c;
  apply_override(o, "epsilon=1e-5");
  apply_override(o, "norm=linf");
  apply_override(o, "flux=upwind");
  CHECK(o.epsilon == 1e-5);
  CHECK(o.eta_value() == doctest::Approx(1e-6));
  CHECK(o.norm == NormChoice::linf);
  CHECK(o.flux == "upwind");
  CHECK_THROWS(apply_override(o, "epsilon"));
  CHECK_THROWS(apply_override(o, "unknown=1"));
  // round trip
  auto const back = parse_run_config(to_json(o));
  CHECK(back.epsilon == o.epsilon);
  CHECK(back.problem == o.problem);
}

TEST_CASE("problem registry")
{
  CHECK_THROWS(transport_problem("rotation_bell", 4));
  CHECK_THROWS(transport_problem("deformation_bell", 3));
  CHECK_THROWS(transport_problem("vp_landau", 2));
  auto const def = transport_problem("deformation_bell", 2);
  CHECK(def.exact_at(1.5));
  CHECK(!def.exact_at(0.7));
  auto const rot = transport_problem("rotation_bell", 2);
  // a quarter turn moves the bell centre from (0.75, 0.5) to (0.5, 0.75)
  double const c[2] = {0.5, 0.75};
  CHECK(rot.exact_at(std::numbers::pi / 2)(c) == doctest::Approx(0.23));
  auto const rot3 = transport_problem("rotation_bell", 3);
  double const c3[3] = {0.5, 0.55, 0.5};
  CHECK(rot3.exact_at(2 * std::numbers::pi)(c3) == doctest::Approx(0.45 * 0.45));
  // the 3D field rotates about (-1, 0, 1)/sqrt(2): the exact solution must be
  // transported by it, checked by a finite difference of u along a
  double const x[3] = {0.43, 0.61, 0.52};
  double const h = 1e-5;
  double u_t = (rot3.exact_at(h)(x) - rot3.exact_at(-h)(x)) / (2 * h);
  double grad_dot_a = 0;
  for (int m = 0; m < 3; ++m)
  {
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[m] += h;
    xm[m] -= h;
    grad_dot_a += rot3.field.value(m, 0, x) * (rot3.initial(xp) - rot3.initial(xm)) / (2 * h);
  }
  CHECK(std::abs(u_t + grad_dot_a) < 1e-6);
}

TEST_CASE("convergence rates")
{
  std::vector<ConvergenceRow> rows{{1e-3, 312, 78, 1.47e-2, 0, 0}, {5e-4, 404, 101, 8.90e-3, 0, 0},
                                   {1e-4, 500, 125, 8.90e-3, 0, 0}};
  compute_rates(rows);
  CHECK(rows[0].r_eps == 0);
  CHECK(rows[1].r_eps == doctest::Approx(std::log(1.47e-2 / 8.90e-3) / std::log(2.0)));
  CHECK(rows[1].r_eps == doctest::Approx(0.72).epsilon(0.01));
  CHECK(rows[1].r_dof == doctest::Approx(1.94).epsilon(0.01));
  CHECK(rows[2].r_eps == 0);
  CHECK(rows[2].r_dof == 0);
  RunConfig c;
  CHECK_THROWS(run_convergence_study(c, {1e-3, 1e-3}, false));
}

TEST_CASE("fixed modes and active percentage")
{
  RunConfig c;
  c.problem = "linear_smooth";
  c.d       = 2;
  c.k       = 1;
  c.N       = 3;
  c.mode    = RunMode::fixed_sparse;
  auto const sparse = run_projection(c, false);
  CHECK(sparse.size() == enumerate_keys(2, 3, false).size());
  c.mode          = RunMode::fixed_full;
  auto const full = run_projection(c, false);
  for (auto const &[l, f] : active_percentage(full))
    CHECK(f == 1.0);
  ElementTable root(2, 1, 3);
  root.insert(ElementKey::root(2));
  auto const pct = active_percentage(root);
  CHECK(pct.size() == 16);
  for (auto const &[l, f] : pct)
    CHECK(f == (l == std::vector<int>{0, 0} ? 1.0 : 0.0));
  // a fixed run keeps its key set
  c.mode = RunMode::fixed_sparse;
  c.T    = 0.05;
  auto const r = run_problem(c, false);
  CHECK(r.table.size() == sparse.size());
}

TEST_CASE("outputs are deterministic and snapshots match the element list")
{
  RunConfig c;
  c.problem       = "rotation_bell";
  c.k             = 1;
  c.N             = 5;
  c.epsilon       = 1e-3;
  c.T             = 0.1;
  c.output_stride = 5;
  c.output_dir    = scratch_dir("a").string();
  auto const r1   = run_problem(c);
  RunConfig c2    = c;
  c2.output_dir   = scratch_dir("b").string();
  run_problem(c2);
  std::size_t files = 0;
  for (auto const &e : fs::directory_iterator(c.output_dir))
  {
    ++files;
    CHECK(slurp(e.path()) == slurp(fs::path(c2.output_dir) / e.path().filename()));
  }
  CHECK(files >= 4);
  std::string const last = std::to_string(r1.steps);
  REQUIRE(fs::exists(fs::path(c.output_dir) / ("snapshot_" + last + ".csv")));

  // the element list names exactly the final active set
  std::ifstream el(fs::path(c.output_dir) / ("elements_" + last + ".csv"));
  std::string line;
  std::getline(el, line);
  CHECK(line == "l1,l2,j1,j2,block_l2");
  std::size_t rows = 0;
  while (std::getline(el, line))
  {
    int l1, l2, j1, j2;
    char comma;
    std::istringstream ls(line);
    ls >> l1 >> comma >> l2 >> comma >> j1 >> comma >> j2;
    CHECK(r1.table.contains(ElementKey({l1, l2}, {j1, j2})));
    ++rows;
  }
  CHECK(rows == r1.table.size());

  // sampled values equal point evaluation of the final solution
  Basis1D const b(1);
  Box const box = Box::unit(2);
  std::ifstream snap(fs::path(c.output_dir) / ("snapshot_" + last + ".csv"));
  std::getline(snap, line);
  CHECK(line == "x1,x2,value");
  std::vector<Side> side{Side::right, Side::right};
  std::size_t points = 0;
  double worst = 0;
  while (std::getline(snap, line))
  {
    double x[2], v;
    char comma;
    std::istringstream ls(line);
    ls >> x[0] >> comma >> x[1] >> comma >> v;
    worst = std::max(worst, std::abs(v - eval_solution(r1.table, b, box, x, side)));
    ++points;
  }
  CHECK(points == 32 * 32);
  CHECK(worst < 1e-12);

  auto const diag = slurp(fs::path(c.output_dir) / "diagnostics.csv");
  CHECK(diag.rfind("t,dof_coeffs,dof_elems,mass,l1_error,l2_error,linf_error\n", 0) == 0);
}

TEST_CASE("Vlasov-Poisson run writes its diagnostics header")
{
  RunConfig c;
  c.problem    = "vp_landau";
  c.k          = 1;
  c.N          = 4;
  c.epsilon    = 1e-3;
  c.T          = 0.2;
  c.output_dir = scratch_dir("vp").string();
  auto const r = run_problem(c);
  CHECK(r.vp.size() == static_cast<std::size_t>(r.steps + 1));
  auto const diag = slurp(fs::path(c.output_dir) / "diagnostics.csv");
  CHECK(diag.rfind("t,dof,mass,momentum,enstrophy,energy\n", 0) == 0);
  CHECK(std::abs(r.vp.back().mass - r.vp.front().mass) < 10 * c.epsilon * r.vp.front().mass);
}
