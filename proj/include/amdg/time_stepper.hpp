#pragma once

#include "amdg/basis.hpp"
#include "amdg/domain.hpp"
#include "amdg/element_table.hpp"
#include "amdg/layout.hpp"
#include "amdg/projection.hpp"
#include "amdg/transport_operator.hpp"

#include <functional>
#include <vector>

namespace amdg
{

struct StepConfig
{
  double cfl = 0.1;
  ThresholdConfig thresholds;
  bool reuse_first_stage = true;
  bool adaptive          = true;  // false: the active set stays fixed

  void validate() const;
};

// CFL / sum_m c_m / h_m with h_m = 2^{-min(l_m + 1, N)} * extent_m
double compute_dt(std::vector<int> const &max_levels, std::vector<double> const &speeds, double cfl, int max_level,
                  Box const &box);

using Residual = std::function<void(std::vector<double> const &u, double t, std::vector<double> &out)>;

// Shu-Osher TVD-RK3; stage times t, t + dt, t + dt/2. When `first_stage` is
// given it replaces u + dt R(u).
std::vector<double> rk3_step(std::vector<double> const &u, Residual const &rhs, double t, double dt,
                             std::vector<double> const *first_stage = nullptr);

/// A semi-discrete system on an adaptive space.
class SemiDiscrete
{
public:
  virtual ~SemiDiscrete() = default;

  // wave speed bounds c_m used by the CFL rule for the current state
  virtual std::vector<double> speeds(ElementTable const &table, double t) = 0;
  virtual void residual(ElementLayout const &layout, std::vector<double> const &u, double t,
                        std::vector<double> &out) = 0;
  virtual Box const &box() const = 0;
  virtual Basis1D const &basis() const = 0;
};

/// Linear transport with a prescribed velocity field.
class TransportSystem : public SemiDiscrete
{
public:
  TransportSystem(Basis1D const &basis, DgOperator op) : basis_(basis), op_(std::move(op)) {}

  std::vector<double> speeds(ElementTable const &, double t) override { return op_.field().speed_bounds(t); }
  void residual(ElementLayout const &layout, std::vector<double> const &u, double t,
                std::vector<double> &out) override
  {
    op_.apply(layout, u, t, out);
  }
  Box const &box() const override { return op_.box(); }
  Basis1D const &basis() const override { return basis_; }
  DgOperator const &op() const { return op_; }

private:
  Basis1D const &basis_;
  DgOperator op_;
};

struct StepStats
{
  double dt          = 0;
  std::size_t added   = 0;
  std::size_t removed = 0;
};

/// One adaptive step: predict, refine, RK3 on the frozen space, coarsen.
/// The step size is min(CFL step, dt_cap).
StepStats evolve_step(ElementTable &table, SemiDiscrete &system, StepConfig const &config, double t,
                      double dt_cap);

// Repeatedly removes leaves (never the root) whose indicator is below eta.
std::size_t coarsen(ElementTable &table, Basis1D const &basis, Box const &box, ThresholdConfig const &config);

// Inserts the missing children of every element whose indicator on `u`
// exceeds epsilon; returns how many elements were added.
std::size_t refine(ElementTable &table, ElementLayout const &layout, std::vector<double> const &u,
                   Basis1D const &basis, Box const &box, ThresholdConfig const &config);

} // namespace amdg
