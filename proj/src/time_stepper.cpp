#include "amdg/time_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amdg
{

void StepConfig::validate() const
{
  if (!(cfl > 0) || cfl > 1)
    throw std::invalid_argument("cfl must be in (0, 1]");
  thresholds.validate();
}

double compute_dt(std::vector<int> const &max_levels, std::vector<double> const &speeds, double cfl, int max_level,
                  Box const &box)
{
  if (speeds.size() != max_levels.size() || static_cast<int>(speeds.size()) != box.dim())
    throw std::invalid_argument("compute_dt: dimension mismatch");
  double denom = 0;
  for (std::size_t m = 0; m < speeds.size(); ++m)
  {
    if (speeds[m] < 0 || !std::isfinite(speeds[m]))
      throw std::invalid_argument("compute_dt: speeds must be finite and nonnegative");
    int const level = std::min(max_levels[m] + 1, max_level);
    double const h  = std::ldexp(box.extent(static_cast<int>(m)), -level);
    denom += speeds[m] / h;
  }
  if (denom == 0)
    throw std::invalid_argument("compute_dt: all wave speeds are zero");
  return cfl / denom;
}

std::vector<double> rk3_step(std::vector<double> const &u, Residual const &rhs, double t, double dt,
                             std::vector<double> const *first_stage)
{
  std::size_t const n = u.size();
  std::vector<double> r(n), u1(n), u2(n), out(n);
  if (first_stage)
    u1 = *first_stage;
  else
  {
    rhs(u, t, r);
    for (std::size_t a = 0; a < n; ++a)
      u1[a] = u[a] + dt * r[a];
  }
  rhs(u1, t + dt, r);
  for (std::size_t a = 0; a < n; ++a)
    u2[a] = 0.75 * u[a] + 0.25 * u1[a] + 0.25 * dt * r[a];
  rhs(u2, t + 0.5 * dt, r);
  for (std::size_t a = 0; a < n; ++a)
    out[a] = u[a] / 3.0 + 2.0 / 3.0 * u2[a] + 2.0 / 3.0 * dt * r[a];
  return out;
}

std::size_t refine(ElementTable &table, ElementLayout const &layout, std::vector<double> const &u,
                   Basis1D const &basis, Box const &box, ThresholdConfig const &config)
{
  int const bs      = layout.block_size();
  std::size_t added = 0;
  for (std::size_t p = 0; p < layout.size(); ++p)
  {
    auto const &key = layout.keys()[p];
    std::span<const double> block(u.data() + p * bs, bs);
    if (element_indicator(block, key, basis, config.norm, box) <= config.epsilon)
      continue;
    for (auto const &c : children(key, config.max_level))
      added += table.insert_with_ancestors(c).size();
  }
  return added;
}

std::size_t coarsen(ElementTable &table, Basis1D const &basis, Box const &box, ThresholdConfig const &config)
{
  std::size_t removed = 0;
  while (true)
  {
    std::vector<ElementKey> doomed;
    for (auto const &key : table.leaves())
    {
      if (key.is_root())
        continue;
      if (element_indicator(table.at(key).coeffs, key, basis, config.norm, box) < config.eta)
        doomed.push_back(key);
    }
    if (doomed.empty())
      break;
    for (auto const &key : doomed)
      table.remove_leaf(key);
    removed += doomed.size();
  }
  return removed;
}

StepStats evolve_step(ElementTable &table, SemiDiscrete &system, StepConfig const &config, double t,
                      double dt_cap)
{
  config.validate();
  StepStats stats;
  Box const &box       = system.box();
  Basis1D const &basis = system.basis();
  stats.dt = std::min(dt_cap, compute_dt(table.max_levels(), system.speeds(table, t), config.cfl,
                                         table.max_level(), box));
  double const dt = stats.dt;

  ElementLayout const before(table);
  std::vector<double> const un = before.gather(table);

  auto run_rk3 = [&](ElementLayout const &layout, std::vector<double> const &u, std::vector<double> const *first) {
    Residual rhs = [&](std::vector<double> const &x, double time, std::vector<double> &out) {
      system.residual(layout, x, time, out);
    };
    return rk3_step(u, rhs, t, dt, first);
  };

  if (!config.adaptive)
  {
    before.scatter(run_rk3(before, un, nullptr), table);
    return stats;
  }

  // prediction by forward Euler on the current space
  std::vector<double> predicted;
  system.residual(before, un, t, predicted);
  for (std::size_t a = 0; a < un.size(); ++a)
    predicted[a] = un[a] + dt * predicted[a];

  stats.added = refine(table, before, predicted, basis, box, config.thresholds);

  ElementLayout const frozen(table);
  std::vector<double> const u0 = frozen.gather(table);
  std::vector<double> next;
  if (config.reuse_first_stage)
  {
    // old elements take the predicted values; new ones need the Euler stage
    std::vector<double> stage;
    if (stats.added > 0)
      system.residual(frozen, u0, t, stage);
    else
      stage.assign(u0.size(), 0.0);
    int const bs = frozen.block_size();
    std::vector<double> first(u0.size());
    for (std::size_t p = 0; p < frozen.size(); ++p)
    {
      int const old = before.position(frozen.keys()[p]);
      for (int i = 0; i < bs; ++i)
        first[p * bs + i] = old >= 0 ? predicted[static_cast<std::size_t>(old) * bs + i]
                                     : u0[p * bs + i] + dt * stage[p * bs + i];
    }
    next = run_rk3(frozen, u0, &first);
  }
  else
    next = run_rk3(frozen, u0, nullptr);
  frozen.scatter(next, table);

  stats.removed = coarsen(table, basis, box, config.thresholds);
  return stats;
}

} // namespace amdg
