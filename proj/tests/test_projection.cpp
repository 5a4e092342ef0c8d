#include "doctest.h"
#include "support.hpp"

#include "amdg/grid_eval.hpp"
#include "amdg/projection.hpp"

#include <cmath>
#include <numbers>

using namespace amdg;

TEST_CASE("threshold configuration")
{
  ThresholdConfig c;
  c.validate();
  c.eta = c.epsilon;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.eta = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_norm("L1") == NormChoice::l1);
  CHECK(parse_norm("l2") == NormChoice::l2);
  CHECK(parse_norm("linf") == NormChoice::linf);
  CHECK_THROWS(parse_norm("l3"));
}

TEST_CASE("polynomials of degree k stay on the root")
{
  Basis1D const b(2);
  Box const box{{-1.0, 2.0}, {3.0, 5.0}};
  auto u = [](std::span<const double> x) { return 1 + x[0] - 0.5 * x[1] * x[1] + x[0] * x[1]; };
  ThresholdConfig const c{1e-8, 1e-9, NormChoice::l2, 6, 2};
  auto const t = adaptive_project(u, c, b, box);
  // the root is flagged, its children carry nothing and stop there
  CHECK(t.size() == 3);
  for (auto const &[k, e] : t)
    if (!k.is_root())
      for (double v : e.coeffs)
        CHECK(std::abs(v) < 1e-13);
  auto const err = solution_error(t, b, box, u);
  CHECK(err.linf < 1e-12);
}

TEST_CASE("indicator norms")
{
  Basis1D const b(1);
  Box const box = Box::unit(2);
  ElementKey const k({2, 1}, {1, 0});
  std::vector<double> c{0.3, -0.4, 0.0, 1.2};
  CHECK(element_indicator(c, k, b, NormChoice::l2, box) == doctest::Approx(1.3));
  // L1 / Linf: sum of |c_i| times the norm of the basis function
  double l1 = 0, linf = 0;
  for (int i0 = 0; i0 < 2; ++i0)
    for (int i1 = 0; i1 < 2; ++i1)
    {
      int ii[2] = {i0, i1}, ll[2] = {2, 1};
      auto const n = basis_norms(b, ii, ll);
      l1 += std::abs(c[i0 * 2 + i1]) * n.l1;
      linf += std::abs(c[i0 * 2 + i1]) * n.linf;
    }
  CHECK(element_indicator(c, k, b, NormChoice::l1, box) == doctest::Approx(l1));
  CHECK(element_indicator(c, k, b, NormChoice::linf, box) == doctest::Approx(linf));
  // physical scaling on a box of volume 4
  Box const big{{0.0, 0.0}, {2.0, 2.0}};
  CHECK(element_indicator(c, k, b, NormChoice::l1, big) == doctest::Approx(2 * l1));
  CHECK(element_indicator(c, k, b, NormChoice::linf, big) == doctest::Approx(linf / 2));
}

TEST_CASE("full-grid projection equals the dense L2 projection")
{
  for (int k = 0; k <= 2; ++k)
  {
    // degree k+2 per direction: both quadratures are exact
    auto u = [k](std::span<const double> x) {
      return std::pow(x[0] - 0.3, k + 2) * (1 + x[1]) - 2 * std::pow(x[1], k + 2) + x[0] * x[1];
    };
    Basis1D const b(k);
    Box const box = Box::unit(2);
    auto const t = project_onto(u, enumerate_keys(2, 3, true), 3, b, box);
    oracle::DenseDG dg(2, 3, k, [](int, std::span<const double>) { return 0.0; }, true, {0, 0});
    auto const from_table = support::to_dense(t, b, box, dg);
    auto const direct     = dg.project(u, k + 3);
    CHECK(support::relative_l2(from_table, direct) < 1e-13);
    // orthonormality: the coefficient norms agree
    double a = 0;
    for (double v : from_table)
      a += v * v;
    CHECK(t.squared_norm() == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("adaptive projection error decreases with epsilon")
{
  constexpr double pi = std::numbers::pi;
  auto u = [](std::span<const double> x) { return std::pow(std::sin(pi * x[0]) * std::sin(pi * x[1]), 4); };
  Basis1D const b(2);
  Box const box = Box::unit(2);
  double prev_err = 1;
  std::size_t prev_dof = 0;
  for (double eps : {1e-3, 1e-4, 1e-5})
  {
    ThresholdConfig const c{eps, eps / 10, NormChoice::l2, 6, 2};
    auto const t = adaptive_project(u, c, b, box);
    t.audit();
    auto const e = solution_error(t, b, box, u);
    CHECK(e.l2 < prev_err);
    CHECK(t.dof() > prev_dof);
    CHECK(e.l2 < 20 * eps);
    prev_err = e.l2;
    prev_dof = t.dof();
  }
}
