#include "support.hpp"

#include "amdg/projection.hpp"

#include <numbers>

namespace support
{

double oracle_deviation(OracleCase const &c, int steps)
{
  using namespace amdg;
  constexpr double pi = std::numbers::pi;
  int const d = c.dim;
  std::vector<double> const constant_speed = d == 1 ? std::vector<double>{0.8} : std::vector<double>{0.8, -0.6};

  VelocityField field;
  oracle::Field a;
  std::vector<double> alpha;
  if (c.rotation)
  {
    field.dim = 2;
    field.components.resize(2);
    field.components[0].push_back(FieldTerm{{}, {Function1D{}, [](double y) { return 0.5 - y; }}});
    field.components[1].push_back(FieldTerm{{}, {[](double x) { return x - 0.5; }, Function1D{}}});
    field.speed_bounds = [](double) { return std::vector<double>{0.5, 0.5}; };
    a = [](int m, std::span<const double> x) { return m == 0 ? 0.5 - x[1] : x[0] - 0.5; };
    alpha = {0.5, 0.5};
  }
  else
  {
    field = VelocityField::constant(constant_speed);
    a     = [constant_speed](int m, std::span<const double>) { return constant_speed[m]; };
    for (double v : constant_speed)
      alpha.push_back(std::abs(v));
  }

  Basis1D const basis(c.degree);
  Box const box = Box::unit(d);
  auto u0 = [d](std::span<const double> x) {
    double v = 1;
    for (int m = 0; m < d; ++m)
      v *= 1.2 + std::sin(2 * pi * x[m] + 0.3 * m);
    return v + (d == 2 ? 0.4 * std::cos(2 * pi * (x[0] - 2 * x[1])) : 0.0);
  };
  ElementTable table = project_onto(u0, enumerate_keys(d, c.level, true), c.level, basis, box);
  FluxKind const flux = c.upwind ? FluxKind::upwind : FluxKind::lax_friedrichs;
  TransportSystem sys(basis, DgOperator(basis, box, std::vector<Boundary>(d, Boundary::periodic), c.level, field, flux));

  oracle::DenseDG dg(d, c.level, c.degree, a, c.upwind, alpha);
  std::vector<double> dense = to_dense(table, basis, box, dg);

  double const dt = 0.05 / (1 << c.level);
  StepConfig cfg;
  cfg.cfl        = 1;  // the cap below decides the step
  cfg.adaptive   = false;
  cfg.thresholds = ThresholdConfig{1e-4, 1e-5, NormChoice::l2, c.level, c.degree};
  double t = 0;
  for (int s = 0; s < steps; ++s)
  {
    t += evolve_step(table, sys, cfg, t, dt).dt;
    dg.rk3(dense, dt);
  }
  return relative_l2(to_dense(table, basis, box, dg), dense);
}

} // namespace support
