#include "doctest.h"
#include "support.hpp"

#include "amdg/grid_eval.hpp"
#include "amdg/projection.hpp"
#include "amdg/vlasov_poisson.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace amdg;

namespace
{
constexpr double pi = std::numbers::pi;

CellField project_cells(std::function<double(double)> const &f, double lo, double hi, int level, int degree)
{
  CellField c(lo, hi, level, degree);
  auto const q = oracle::gauss(degree + 3);
  double const h = c.width();
  for (int cell = 0; cell < c.cells(); ++cell)
    for (int p = 0; p <= degree; ++p)
    {
      double s = 0;
      for (std::size_t i = 0; i < q.x.size(); ++i)
        s += q.w[i] * f(lo + (cell + q.x[i]) * h) * oracle::legendre01(p, q.x[i]);
      c.coeffs[cell * (degree + 1) + p] = s;
    }
  return c;
}
} // namespace

TEST_CASE("cell field basics")
{
  auto const c = project_cells([](double x) { return 1 + x * x; }, 0, 2, 3, 2);
  CHECK(c.value(0.7) == doctest::Approx(1 + 0.49));
  CHECK(c.integral() == doctest::Approx(2 + 8.0 / 3));
  CHECK(c.max_abs() == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("periodic Poisson")
{
  double const L = 4 * pi;
  PeriodicPoisson solver(0, L, 4, 2);
  SUBCASE("zero source")
  {
    auto const s = solver.solve(CellField(0, L, 4, 2));
    for (double v : s.field.coeffs)
      CHECK(v == 0.0);
  }
  SUBCASE("incompatible source is rejected")
  {
    auto const one = project_cells([](double) { return 1.0; }, 0, L, 4, 2);
    CHECK_THROWS_AS(solver.solve(one), std::domain_error);
    CHECK_THROWS_AS(solver.solve(CellField(0, L, 5, 2)), std::invalid_argument);
  }
  SUBCASE("random zero-mean source")
  {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> dist(-1, 1);
    CellField s(0, L, 4, 2);
    for (double &v : s.coeffs)
      v = dist(gen);
    double const mean = s.integral() / L;
    for (int c = 0; c < s.cells(); ++c)
      s.coeffs[c * 3] -= mean;
    auto const sol = solver.solve(s);
    CHECK(std::abs(sol.field.integral()) < 1e-10);
    CHECK(solver.residual(s, sol) < 1e-10);
    CHECK(std::abs(sol.potential.integral()) < 1e-10);
  }
  SUBCASE("cosine source")
  {
    auto const s   = project_cells([](double x) { return 0.5 * std::cos(0.5 * x); }, 0, L, 6, 2);
    auto const E   = solve_poisson_periodic(s);
    for (double x : {0.3, 2.0, 7.1, 11.9})
      CHECK(E.value(x) == doctest::Approx(std::sin(0.5 * x)).epsilon(1e-4).scale(1));
  }
}

TEST_CASE("radial field")
{
  auto const c = project_cells([](double) { return 1.7; }, -3, 3, 4, 2);
  RadialField const E(c);
  CHECK(E(0.0) == 0.0);
  for (double r : {-2.9, -1.0, -0.1, 0.05, 0.375, 1.3, 3.0})
    CHECK(std::abs(E(r) - 1.7 * r / 2) < 1e-12);
  // rho = s^2 is exact at degree 2: E = r^3 / 4
  auto const q = project_cells([](double s) { return s * s; }, -3, 3, 3, 2);
  RadialField const Eq(q);
  for (double r : {-2.2, -0.4, 0.7, 2.9})
    CHECK(Eq(r) == doctest::Approx(r * r * r / 4).epsilon(1e-12));
  CHECK_THROWS(RadialField(CellField(-3, 2, 3, 1)));
}

TEST_CASE("Vlasov-Poisson initial data and external field")
{
  auto const landau = vp_problem("landau");
  double const origin[2] = {0.0, 0.0};
  CHECK(landau.initial(origin) == doctest::Approx(1.5 / std::sqrt(2 * pi)));
  CHECK(landau.velocity_cutoff == doctest::Approx(2 * pi));
  double const p[2] = {1.3, 0.0};
  CHECK(vp_problem("two_stream_1").initial(p) == 0.0);
  auto const beam = vp_problem("beam");
  double const far[2] = {2.0, 0.0};
  CHECK(beam.initial(far) == 0.0);
  CHECK(beam.variant == VpVariant::oscillatory);
  CHECK(external_field(0.0, 1.0, 0.05) == doctest::Approx(-19.0));
  CHECK_THROWS(vp_problem("unknown"));
}

TEST_CASE("density from the hierarchical representation")
{
  Basis1D const b(2);
  SUBCASE("Landau")
  {
    auto const p = vp_problem("landau");
    auto const t = adaptive_project(p.initial, ThresholdConfig{1e-6, 1e-7, NormChoice::l2, 6, 2}, b, p.box);
    auto const rho = compute_density(t, b, p.box);
    for (double x : {0.1, 3.0, 6.5, 12.0})
      CHECK(rho.value(x) == doctest::Approx(1 + 0.5 * std::cos(0.5 * x)).epsilon(1e-4));
  }
  SUBCASE("random table against dense quadrature")
  {
    Box const box{{0.0, -2.0}, {3.0, 2.0}};
    ElementTable t(2, 2, 4);
    for (auto const &key : enumerate_keys(2, 4, true))
      t.insert(key);
    support::randomize(t, 5);
    auto const rho = compute_density(t, b, box);
    auto const q   = oracle::gauss(4);
    std::vector<Side> side{Side::right, Side::right};
    for (double x : {0.05, 0.77, 1.5001, 2.9})
    {
      double s = 0;
      for (int cell = 0; cell < 16; ++cell)
        for (std::size_t i = 0; i < q.x.size(); ++i)
        {
          double const pt[2] = {x, -2.0 + 4.0 * (cell + q.x[i]) / 16};
          s += q.w[i] * 4.0 / 16 * eval_solution(t, b, box, pt, side);
        }
      CHECK(std::abs(rho.value(x) - s) < 1e-10);
    }
  }
}

TEST_CASE("Vlasov-Poisson diagnostics")
{
  Basis1D const b(2);
  auto p = vp_problem("landau");
  auto const t = adaptive_project(p.initial, ThresholdConfig{1e-5, 1e-6, NormChoice::l2, 5, 2}, b, p.box);
  VlasovSystem sys(b, p, 5, FluxKind::upwind);
  auto const d = sys.diagnostics(t, 0.0);
  CHECK(d.mass == doctest::Approx(4 * pi).epsilon(1e-6));
  CHECK(std::abs(d.momentum) < 1e-10);
  CHECK(d.enstrophy == doctest::Approx(d.enstrophy_coeffs).epsilon(1e-10));
  CHECK(d.dof == t.dof());
  // kinetic 2 pi plus field energy pi (E = sin(x/2))
  CHECK(d.energy == doctest::Approx(3 * pi).epsilon(1e-4));
}

TEST_CASE("free streaming keeps zero momentum")
{
  // even-in-v data without field: a = (v, 0)
  Basis1D const b(1);
  VpProblem p = vp_problem("landau");
  auto const t0 = adaptive_project(p.initial, ThresholdConfig{1e-4, 1e-5, NormChoice::l2, 4, 1}, b, p.box);
  auto t        = t0;
  auto const field = vp_velocity_field([](double) { return 0.0; }, 0.0, p, 0.0);
  TransportSystem sys(b, DgOperator(b, p.box, {Boundary::periodic, Boundary::zero_inflow}, 4, field, FluxKind::upwind));
  StepConfig s;
  s.thresholds = ThresholdConfig{1e-4, 1e-5, NormChoice::l2, 4, 1};
  VlasovSystem diag(b, p, 4, FluxKind::upwind);
  double time = 0;
  for (int n = 0; n < 5; ++n)
  {
    time += evolve_step(t, sys, s, time, 1.0).dt;
    CHECK(std::abs(diag.diagnostics(t, time).momentum) < 1e-10);
  }
}
