#include "doctest.h"
#include "support.hpp"

#include "amdg/grid_eval.hpp"
#include "amdg/problems.hpp"
#include "amdg/projection.hpp"
#include "amdg/time_stepper.hpp"

#include <cmath>

using namespace amdg;

TEST_CASE("CFL step uses the predicted level")
{
  Box const box{{0.0, 0.0}, {2.0, 1.0}};
  // h = 2^{-min(l+1, N)} * extent
  double const dt = compute_dt({2, 5}, {1.0, 0.5}, 0.1, 5, box);
  double const expect = 0.1 / (1.0 / (2.0 / 8) + 0.5 / (1.0 / 32));
  CHECK(dt == doctest::Approx(expect));
  CHECK_THROWS(compute_dt({2}, {1.0, 0.5}, 0.1, 5, box));
}

TEST_CASE("RK3 is third order on a scalar ODE")
{
  // u' = u cos t, u(0) = 1, u(t) = exp(sin t)
  Residual rhs = [](std::vector<double> const &u, double t, std::vector<double> &out) {
    out.assign(1, u[0] * std::cos(t));
  };
  std::vector<double> err;
  for (int n : {10, 20, 40, 80})
  {
    std::vector<double> u{1.0};
    double const dt = 1.0 / n;
    for (int s = 0; s < n; ++s)
      u = rk3_step(u, rhs, s * dt, dt);
    err.push_back(std::abs(u[0] - std::exp(std::sin(1.0))));
  }
  for (std::size_t i = 1; i < err.size(); ++i)
    CHECK(std::log2(err[i - 1] / err[i]) > 2.8);
}

TEST_CASE("refine adds zero children, coarsen never removes the root")
{
  Basis1D const b(1);
  Box const box = Box::unit(2);
  ThresholdConfig const c{1e-3, 1e-4, NormChoice::l2, 4, 1};
  ElementTable t(2, 1, 4);
  t.insert(ElementKey::root(2));
  t.at(ElementKey::root(2)).coeffs = {1, 0.5, 0, 0};
  ElementLayout const layout(t);
  std::vector<double> const u = layout.gather(t);
  CHECK(refine(t, layout, u, b, box, c) == 2);
  t.audit();
  for (auto const &k : t.leaves())
    for (double v : t.at(k).coeffs)
      CHECK(v == 0.0);
  CHECK(coarsen(t, b, box, c) == 2);
  CHECK(t.size() == 1);
  t.at(ElementKey::root(2)).coeffs = {0, 0, 0, 0};
  CHECK(coarsen(t, b, box, c) == 0);
  CHECK(t.size() == 1);
}

TEST_CASE("first-stage reuse does not change the result")
{
  auto const p = transport_problem("rotation_bell", 2);
  Basis1D const b(2);
  ThresholdConfig const c{1e-4, 1e-5, NormChoice::l2, 5, 2};
  auto t1 = adaptive_project(p.initial, c, b, p.box);
  auto t2 = t1;
  TransportSystem sys(b, DgOperator(b, p.box, p.boundaries, 5, p.field, FluxKind::lax_friedrichs));
  StepConfig s1, s2;
  s1.thresholds = s2.thresholds = c;
  s2.reuse_first_stage          = false;
  double t = 0;
  std::size_t added = 0;
  for (int n = 0; n < 20; ++n)
  {
    auto const a = evolve_step(t1, sys, s1, t, 1.0);
    evolve_step(t2, sys, s2, t, 1.0);
    t += a.dt;
    added += a.added;
  }
  CHECK(added > 0);
  REQUIRE(t1.size() == t2.size());
  double worst = 0;
  for (auto const &[k, e] : t1)
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
      worst = std::max(worst, std::abs(e.coeffs[i] - t2.at(k).coeffs[i]));
  CHECK(worst < 1e-13);
}

TEST_CASE("adaptive steps conserve mass and keep the structure")
{
  auto const p = transport_problem("linear_discontinuous", 2);
  Basis1D const b(1);
  ThresholdConfig const c{1e-3, 1e-4, NormChoice::l1, 5, 1};
  auto t = adaptive_project(p.initial, c, b, p.box);
  TransportSystem sys(b, DgOperator(b, p.box, p.boundaries, 5, p.field, FluxKind::upwind));
  StepConfig s;
  s.thresholds = c;
  double const m0 = solution_mass(t, p.box);
  double time     = 0;
  for (int n = 0; n < 30; ++n)
  {
    time += evolve_step(t, sys, s, time, 1.0).dt;
    t.audit();
    for (auto const &k : t.leaves())
      if (!k.is_root())
        CHECK(element_indicator(t.at(k).coeffs, k, b, c.norm, p.box) >= c.eta);
  }
  CHECK(std::abs(solution_mass(t, p.box) - m0) < 1e-13 * m0);
}
