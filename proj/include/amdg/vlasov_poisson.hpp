#pragma once

#include "amdg/basis.hpp"
#include "amdg/domain.hpp"
#include "amdg/element_table.hpp"
#include "amdg/layout.hpp"
#include "amdg/projection.hpp"
#include "amdg/time_stepper.hpp"
#include "amdg/transport_operator.hpp"

#include <memory>
#include <string>
#include <vector>

namespace amdg
{

/// Piecewise polynomial on a uniform level-N mesh of [lower, upper]; on each
/// cell the basis is the orthonormal Legendre family of the unit cell mapped
/// affinely (so the cell mass matrix is h * I).
struct CellField
{
  double lower = 0, upper = 1;
  int level  = 0;
  int degree = 0;
  std::vector<double> coeffs;  // cells x (k+1)

  CellField() = default;
  CellField(double lower, double upper, int level, int degree);

  int cells() const { return 1 << level; }
  double width() const { return (upper - lower) / cells(); }
  double value(double x) const;
  double integral() const;
  // max |value| over k+2 Gauss points per cell
  double max_abs() const;
};

// rho(x) = int f dv on the level-N x-mesh; direction 0 is x, direction 1 is v.
CellField compute_density(ElementLayout const &layout, std::vector<double> const &f, Basis1D const &basis,
                          Box const &box);
CellField compute_density(ElementTable const &table, Basis1D const &basis, Box const &box);

/// LDG solver for -Phi'' = s on a periodic interval with alternating fluxes
/// (Phi^- , q^+) and the mean-zero gauge. The sparse factorization is reused.
class PeriodicPoisson
{
public:
  PeriodicPoisson(double lower, double upper, int level, int degree);
  ~PeriodicPoisson();
  PeriodicPoisson(PeriodicPoisson &&) noexcept;
  PeriodicPoisson &operator=(PeriodicPoisson &&) noexcept;

  struct Solution
  {
    CellField potential;
    CellField field;  // E = -Phi'
  };

  // Throws std::domain_error when |mean(s)| exceeds `tolerance`.
  Solution solve(CellField const &source, double tolerance = 1e-10) const;

  // discrete residual of a candidate solution (max norm), for checking
  double residual(CellField const &source, Solution const &sol) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CellField solve_poisson_periodic(CellField const &source, double tolerance = 1e-10);

/// E(r) = (1/r) int_0^r s rho(s) ds with E(0) = 0, exact per cell.
class RadialField
{
public:
  explicit RadialField(CellField rho);
  double operator()(double r) const;
  double max_abs() const;

private:
  CellField rho_;
  std::vector<double> face_integral_;  // int_0^{face} s rho(s) ds
  int zero_face_;
};

enum class VpVariant
{
  standard,
  oscillatory
};

struct VpProblem
{
  std::string name;
  VpVariant variant = VpVariant::standard;
  Box box;                     // (x, v) or (r, v)
  double velocity_cutoff = 0;  // V_c
  double eps_scale       = 0.05;
  ScalarFunction initial;
};

// landau, bump_on_tail, two_stream_1, two_stream_2, beam
VpProblem vp_problem(std::string const &name, double eps_scale = 0.05);

// standard: a = (v, E(x)); oscillatory: a = (v/eps, E(r) + E_ext(t, r))
VelocityField vp_velocity_field(Function1D const &field, double field_bound, VpProblem const &problem, double t);

double external_field(double t, double r, double eps_scale);

struct Diagnostics
{
  double time     = 0;
  std::size_t dof = 0;
  double mass = 0, momentum = 0, enstrophy = 0, enstrophy_coeffs = 0, energy = 0;
};

/// Vlasov-Poisson right-hand side; the field is recomputed from the stage
/// solution at every evaluation unless `refresh_every_stage` is false.
class VlasovSystem : public SemiDiscrete
{
public:
  VlasovSystem(Basis1D const &basis, VpProblem problem, int max_level, FluxKind flux);
  ~VlasovSystem() override;

  std::vector<double> speeds(ElementTable const &table, double t) override;
  void residual(ElementLayout const &layout, std::vector<double> const &u, double t,
                std::vector<double> &out) override;
  Box const &box() const override { return problem_.box; }
  Basis1D const &basis() const override { return basis_; }

  VpProblem const &problem() const { return problem_; }
  void set_refresh_every_stage(bool on) { refresh_every_stage_ = on; }

  // field for the given state as a function of x (or r)
  struct Field
  {
    Function1D value;
    double bound;
    double energy;  // 1/2 int E^2 over the x (or r) interval
  };
  Field field(ElementLayout const &layout, std::vector<double> const &u) const;

  Diagnostics diagnostics(ElementTable const &table, double t) const;

private:
  Basis1D const &basis_;
  VpProblem problem_;
  int max_level_;
  FluxKind flux_;
  bool refresh_every_stage_ = true;
  std::unique_ptr<PeriodicPoisson> poisson_;
  // field cached for once-per-step refresh
  std::unique_ptr<Field> frozen_;
  double frozen_time_ = -1;
};

} // namespace amdg
