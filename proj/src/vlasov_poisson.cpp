#include "amdg/vlasov_poisson.hpp"
#include "amdg/grid_eval.hpp"
#include "amdg/quadrature.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amdg
{

namespace
{
double unit_legendre(int p, double x) { return std::sqrt(2.0 * p + 1.0) * legendre(p, 2.0 * x - 1.0); }
double unit_legendre_derivative(int p, double x)
{
  return 2.0 * std::sqrt(2.0 * p + 1.0) * legendre_derivative(p, 2.0 * x - 1.0);
}
} // namespace

CellField::CellField(double lo, double hi, int lvl, int deg)
    : lower(lo), upper(hi), level(lvl), degree(deg), coeffs(static_cast<std::size_t>(1 << lvl) * (deg + 1), 0.0)
{
  if (!(hi > lo))
    throw std::invalid_argument("CellField: empty interval");
}

double CellField::value(double x) const
{
  double const h = width();
  int c          = static_cast<int>(std::floor((x - lower) / h));
  c              = std::clamp(c, 0, cells() - 1);
  double const eta = (x - lower) / h - c;
  double s = 0;
  for (int p = 0; p <= degree; ++p)
    s += coeffs[static_cast<std::size_t>(c) * (degree + 1) + p] * unit_legendre(p, eta);
  return s;
}

double CellField::integral() const
{
  double s = 0;
  for (int c = 0; c < cells(); ++c)
    s += coeffs[static_cast<std::size_t>(c) * (degree + 1)];
  return s * width();
}

double CellField::max_abs() const
{
  auto const gq = gauss_quadrature(degree + 2);
  double m = 0;
  for (int c = 0; c < cells(); ++c)
    for (int q = 0; q < gq.order; ++q)
    {
      double s = 0;
      for (int p = 0; p <= degree; ++p)
        s += coeffs[static_cast<std::size_t>(c) * (degree + 1) + p] * unit_legendre(p, gq.nodes[q]);
      m = std::max(m, std::abs(s));
    }
  return m;
}

CellField compute_density(ElementLayout const &layout, std::vector<double> const &f, Basis1D const &basis,
                          Box const &box)
{
  if (layout.dim() != 2)
    throw std::invalid_argument("compute_density: phase space must be two-dimensional");
  int const np = basis.size();
  int const N  = layout.max_level();
  CellField rho(box.lower[0], box.upper[0], N, basis.degree());
  int const cells = rho.cells();
  auto const gq   = gauss_quadrature(np);
  // only the v-constant scaling mode integrates to a nonzero value in v
  double const scale = std::sqrt(box.extent(1) / box.extent(0));
  std::vector<double> nodal(static_cast<std::size_t>(cells) * gq.order, 0.0);
  std::vector<double> vals(np);
  for (std::size_t p = 0; p < layout.size(); ++p)
  {
    auto const &key = layout.keys()[p];
    if (key.level[1] != 0)
      continue;
    int const l = key.level[0], j = key.cell[0];
    int const c0 = static_cast<int>(std::lround(support_lower(l, j) * cells));
    int const c1 = static_cast<int>(std::lround(support_upper(l, j) * cells));
    double const *block = f.data() + p * layout.block_size();
    for (int c = c0; c < c1; ++c)
      for (int q = 0; q < gq.order; ++q)
      {
        basis.eval_all(l, j, (c + gq.nodes[q]) / cells, Side::right, vals);
        double s = 0;
        for (int i = 0; i < np; ++i)
          s += block[i * np] * vals[i];
        nodal[static_cast<std::size_t>(c) * gq.order + q] += scale * s;
      }
  }
  for (int c = 0; c < cells; ++c)
    for (int a = 0; a < np; ++a)
    {
      double s = 0;
      for (int q = 0; q < gq.order; ++q)
        s += gq.weights[q] * nodal[static_cast<std::size_t>(c) * gq.order + q] * unit_legendre(a, gq.nodes[q]);
      rho.coeffs[static_cast<std::size_t>(c) * np + a] = s;
    }
  return rho;
}

CellField compute_density(ElementTable const &table, Basis1D const &basis, Box const &box)
{
  ElementLayout const layout(table);
  return compute_density(layout, layout.gather(table), basis, box);
}

struct PeriodicPoisson::Impl
{
  double lower, upper;
  int level, degree;
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

// Unknown ordering: Phi (cells x np), q (cells x np), multiplier.
PeriodicPoisson::PeriodicPoisson(double lower, double upper, int level, int degree)
    : impl_(std::make_unique<Impl>())
{
  impl_->lower  = lower;
  impl_->upper  = upper;
  impl_->level  = level;
  impl_->degree = degree;
  int const np    = degree + 1;
  int const cells = 1 << level;
  double const h  = (upper - lower) / cells;
  int const nphi  = cells * np;
  int const n     = 2 * nphi + 1;

  // D[a][b] = int_0^1 phi_b phi_a'
  auto const gq = gauss_quadrature(np + 1);
  std::vector<double> D(np * np, 0.0), right(np), left(np);
  for (int a = 0; a < np; ++a)
  {
    right[a] = unit_legendre(a, 1.0);
    left[a]  = unit_legendre(a, 0.0);
    for (int b = 0; b < np; ++b)
      for (int q = 0; q < gq.order; ++q)
        D[a * np + b] += gq.weights[q] * unit_legendre(b, gq.nodes[q]) * unit_legendre_derivative(a, gq.nodes[q]);
  }

  std::vector<Eigen::Triplet<double>> trip;
  auto phi = [np](int c, int b) { return c * np + b; };
  auto q   = [np, nphi](int c, int b) { return nphi + c * np + b; };
  for (int c = 0; c < cells; ++c)
  {
    int const prev = (c + cells - 1) % cells;
    int const next = (c + 1) % cells;
    for (int a = 0; a < np; ++a)
    {
      // int q w + int Phi w' - Phi^-_{c+1/2} w^-_{c+1/2} + Phi^-_{c-1/2} w^+_{c-1/2} = 0
      int const row1 = phi(c, a);
      trip.emplace_back(row1, q(c, a), h);
      for (int b = 0; b < np; ++b)
      {
        trip.emplace_back(row1, phi(c, b), D[a * np + b] - right[b] * right[a]);
        trip.emplace_back(row1, phi(prev, b), right[b] * left[a]);
      }
      // int q w' - q^+_{c+1/2} w^-_{c+1/2} + q^+_{c-1/2} w^+_{c-1/2} = int s w
      int const row2 = q(c, a);
      for (int b = 0; b < np; ++b)
      {
        trip.emplace_back(row2, q(c, b), D[a * np + b] + left[b] * left[a]);
        trip.emplace_back(row2, q(next, b), -left[b] * right[a]);
      }
      if (a == 0)
        trip.emplace_back(row2, n - 1, h);
    }
    // gauge: int Phi = 0
    trip.emplace_back(n - 1, phi(c, 0), h);
  }
  impl_->matrix.resize(n, n);
  impl_->matrix.setFromTriplets(trip.begin(), trip.end());
  impl_->matrix.makeCompressed();
  impl_->lu.compute(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("PeriodicPoisson: factorization failed");
}

PeriodicPoisson::~PeriodicPoisson()                                     = default;
PeriodicPoisson::PeriodicPoisson(PeriodicPoisson &&) noexcept            = default;
PeriodicPoisson &PeriodicPoisson::operator=(PeriodicPoisson &&) noexcept = default;

namespace
{
Eigen::VectorXd poisson_rhs(CellField const &source, int n)
{
  int const np    = source.degree + 1;
  int const nphi  = source.cells() * np;
  double const h  = source.width();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < nphi; ++a)
    rhs(nphi + a) = h * source.coeffs[a];
  return rhs;
}
} // namespace

PeriodicPoisson::Solution PeriodicPoisson::solve(CellField const &source, double tolerance) const
{
  if (source.level != impl_->level || source.degree != impl_->degree || source.lower != impl_->lower
      || source.upper != impl_->upper)
    throw std::invalid_argument("PeriodicPoisson: source lives on a different mesh");
  double const mean = source.integral() / (source.upper - source.lower);
  if (std::abs(mean) > tolerance)
    throw std::domain_error("Poisson source is incompatible with periodicity: mean " + std::to_string(mean));
  int const n    = static_cast<int>(impl_->matrix.rows());
  Eigen::VectorXd const x = impl_->lu.solve(poisson_rhs(source, n));
  int const nphi = source.cells() * (source.degree + 1);
  Solution sol{CellField(impl_->lower, impl_->upper, impl_->level, impl_->degree),
               CellField(impl_->lower, impl_->upper, impl_->level, impl_->degree)};
  for (int a = 0; a < nphi; ++a)
  {
    sol.potential.coeffs[a] = x(a);
    sol.field.coeffs[a]     = -x(nphi + a);
  }
  return sol;
}

double PeriodicPoisson::residual(CellField const &source, Solution const &sol) const
{
  int const n    = static_cast<int>(impl_->matrix.rows());
  int const nphi = source.cells() * (source.degree + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < nphi; ++a)
  {
    x(a)        = sol.potential.coeffs[a];
    x(nphi + a) = -sol.field.coeffs[a];
  }
  return (impl_->matrix * x - poisson_rhs(source, n)).cwiseAbs().maxCoeff();
}

CellField solve_poisson_periodic(CellField const &source, double tolerance)
{
  PeriodicPoisson solver(source.lower, source.upper, source.level, source.degree);
  return solver.solve(source, tolerance).field;
}

RadialField::RadialField(CellField rho) : rho_(std::move(rho))
{
  int const cells = rho_.cells();
  double const h  = rho_.width();
  double const z  = -rho_.lower / h;
  zero_face_      = static_cast<int>(std::lround(z));
  if (std::abs(z - zero_face_) > 1e-9 || zero_face_ < 0 || zero_face_ > cells)
    throw std::invalid_argument("RadialField: r = 0 must be a mesh face");
  auto const gq = gauss_quadrature(rho_.degree + 2);
  face_integral_.assign(cells + 1, 0.0);
  auto cell_moment = [&](int c) {
    double s = 0;
    for (int q = 0; q < gq.order; ++q)
    {
      double const r = rho_.lower + (c + gq.nodes[q]) * h;
      s += gq.weights[q] * h * r * rho_.value(r);
    }
    return s;
  };
  for (int f = zero_face_ + 1; f <= cells; ++f)
    face_integral_[f] = face_integral_[f - 1] + cell_moment(f - 1);
  for (int f = zero_face_ - 1; f >= 0; --f)
    face_integral_[f] = face_integral_[f + 1] - cell_moment(f);
}

double RadialField::operator()(double r) const
{
  if (r == 0.0)
    return 0.0;
  double const h  = rho_.width();
  int const cells = rho_.cells();
  int c           = std::clamp(static_cast<int>(std::floor((r - rho_.lower) / h)), 0, cells - 1);
  // integrate from the face nearer to 0 towards r
  int const face   = r > 0 ? c : c + 1;
  double const r0  = rho_.lower + face * h;
  auto const gq    = gauss_quadrature(rho_.degree + 2);
  double partial   = 0;
  for (int q = 0; q < gq.order; ++q)
  {
    double const s = r0 + (r - r0) * gq.nodes[q];
    partial += gq.weights[q] * (r - r0) * s * rho_.value(s);
  }
  return (face_integral_[face] + partial) / r;
}

double RadialField::max_abs() const
{
  auto const gq = gauss_quadrature(rho_.degree + 2);
  double m = 0;
  for (int c = 0; c < rho_.cells(); ++c)
    for (int q = 0; q < gq.order; ++q)
      m = std::max(m, std::abs((*this)(rho_.lower + (c + gq.nodes[q]) * rho_.width())));
  return m;
}

double external_field(double t, double r, double eps_scale)
{
  double const c = std::cos(t / eps_scale);
  return -r / eps_scale + r * c * c;
}

VpProblem vp_problem(std::string const &name, double eps_scale)
{
  constexpr double pi = std::numbers::pi;
  double const inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
  VpProblem p;
  p.name = name;
  auto periodic_box = [](double L, double vc) { return Box{{0.0, -vc}, {L, vc}}; };
  if (name == "landau")
  {
    double const A = 0.5, k = 0.5;
    p.velocity_cutoff = 2 * pi;
    p.box             = periodic_box(4 * pi, p.velocity_cutoff);
    p.initial = [=](std::span<const double> x) {
      return inv_sqrt_2pi * std::exp(-0.5 * x[1] * x[1]) * (1 + A * std::cos(k * x[0]));
    };
  }
  else if (name == "bump_on_tail")
  {
    double const A = 0.04, k = 0.3, u = 4.5, vt = 0.5;
    double const np_ = 9.0 / (10.0 * std::sqrt(10.0 * pi)), nb = 2.0 / (10.0 * std::sqrt(10.0 * pi));
    p.velocity_cutoff = 13;
    p.box             = periodic_box(20 * pi / 3, p.velocity_cutoff);
    p.initial = [=](std::span<const double> x) {
      double const v  = x[1];
      double const fb = np_ * std::exp(-0.5 * v * v) + nb * std::exp(-(v - u) * (v - u) / (2 * vt * vt));
      return fb * (1 + A * std::cos(k * x[0]));
    };
  }
  else if (name == "two_stream_1")
  {
    double const A = 0.05, k = 0.5;
    p.velocity_cutoff = 2 * pi;
    p.box             = periodic_box(4 * pi, p.velocity_cutoff);
    p.initial = [=](std::span<const double> x) {
      double const v = x[1];
      return inv_sqrt_2pi * v * v * std::exp(-0.5 * v * v) * (1 + A * std::cos(k * x[0]));
    };
  }
  else if (name == "two_stream_2")
  {
    double const A = 0.05, k = 2.0 / 13.0, u = 0.99, vt = 0.3;
    p.velocity_cutoff = 5;
    p.box             = periodic_box(13 * pi, p.velocity_cutoff);
    p.initial = [=](std::span<const double> x) {
      double const v = x[1];
      double const f = (std::exp(-(u + v) * (u + v) / (2 * vt * vt)) + std::exp(-(u - v) * (u - v) / (2 * vt * vt)))
                     / (2 * vt * std::sqrt(2 * pi));
      return f * (1 + A * std::cos(k * x[0]));
    };
  }
  else if (name == "beam")
  {
    double const n0 = 4, vt = 0.1, rm = 1.85;
    p.variant         = VpVariant::oscillatory;
    p.eps_scale       = eps_scale;
    p.velocity_cutoff = 3;
    p.box             = Box{{-3.0, -3.0}, {3.0, 3.0}};
    p.initial = [=](std::span<const double> x) {
      if (std::abs(x[0]) > rm)
        return 0.0;
      return n0 / (vt * std::sqrt(2 * pi)) * std::exp(-x[1] * x[1] / (2 * vt * vt));
    };
  }
  else
    throw std::invalid_argument("unknown Vlasov-Poisson initial condition '" + name + "'");
  if (!(eps_scale > 0))
    throw std::invalid_argument("eps_scale must be positive");
  return p;
}

VelocityField vp_velocity_field(Function1D const &field, double field_bound, VpProblem const &problem, double t)
{
  VelocityField a;
  a.dim = 2;
  a.components.resize(2);
  double const vc = problem.velocity_cutoff;
  if (problem.variant == VpVariant::standard)
  {
    a.components[0].push_back(FieldTerm{{}, {Function1D{}, [](double v) { return v; }}});
    a.components[1].push_back(FieldTerm{{}, {field, Function1D{}}});
    a.speed_bounds = [vc, field_bound](double) { return std::vector<double>{vc, field_bound}; };
    return a;
  }
  double const eps = problem.eps_scale;
  a.components[0].push_back(FieldTerm{{}, {Function1D{}, [eps](double v) { return v / eps; }}});
  Function1D total = [field, t, eps](double r) { return field(r) + external_field(t, r, eps); };
  a.components[1].push_back(FieldTerm{{}, {total, Function1D{}}});
  a.speed_bounds = [vc, eps, field_bound](double) { return std::vector<double>{vc / eps, field_bound}; };
  a.time_dependent = true;
  return a;
}

VlasovSystem::VlasovSystem(Basis1D const &basis, VpProblem problem, int max_level, FluxKind flux)
    : basis_(basis), problem_(std::move(problem)), max_level_(max_level), flux_(flux)
{
  if (problem_.variant == VpVariant::standard)
    poisson_ = std::make_unique<PeriodicPoisson>(problem_.box.lower[0], problem_.box.upper[0], max_level_,
                                                 basis_.degree());
}

VlasovSystem::~VlasovSystem() = default;

VlasovSystem::Field VlasovSystem::field(ElementLayout const &layout, std::vector<double> const &u) const
{
  CellField rho = compute_density(layout, u, basis_, problem_.box);
  auto const gq = gauss_quadrature(basis_.degree() + 2);
  if (problem_.variant == VpVariant::standard)
  {
    // neutralizing background taken as the mean density, which is 1 up to
    // the velocity truncation and the boundary outflow
    double const mean = rho.integral() / (rho.upper - rho.lower);
    for (int c = 0; c < rho.cells(); ++c)
      rho.coeffs[static_cast<std::size_t>(c) * (rho.degree + 1)] -= mean;
    auto sol = std::make_shared<CellField>(poisson_->solve(rho, 1e-8).field);
    double energy = 0;
    for (double c : sol->coeffs)
      energy += c * c;
    energy *= 0.5 * sol->width();
    return Field{[sol](double x) { return sol->value(x); }, sol->max_abs(), energy};
  }
  auto radial = std::make_shared<RadialField>(std::move(rho));
  double energy = 0;
  int const cells = 1 << max_level_;
  double const h  = problem_.box.extent(0) / cells;
  for (int c = 0; c < cells; ++c)
    for (int q = 0; q < gq.order; ++q)
    {
      double const e = (*radial)(problem_.box.lower[0] + (c + gq.nodes[q]) * h);
      energy += 0.5 * gq.weights[q] * h * e * e;
    }
  return Field{[radial](double r) { return (*radial)(r); }, radial->max_abs(), energy};
}

namespace
{
// max |E + E_ext| over the quadrature nodes of the level-N mesh
double total_bound(VlasovSystem::Field const &f, VpProblem const &problem, int max_level, int degree, double t)
{
  if (problem.variant == VpVariant::standard)
    return f.bound;
  auto const gq   = gauss_quadrature(degree + 2);
  int const cells = 1 << max_level;
  double const h  = problem.box.extent(0) / cells;
  double m        = 0;
  for (int c = 0; c < cells; ++c)
    for (int q = 0; q < gq.order; ++q)
    {
      double const r = problem.box.lower[0] + (c + gq.nodes[q]) * h;
      m = std::max(m, std::abs(f.value(r) + external_field(t, r, problem.eps_scale)));
    }
  // the faces carry the largest |r|
  for (double r : {problem.box.lower[0], problem.box.upper[0]})
    m = std::max(m, std::abs(f.value(r) + external_field(t, r, problem.eps_scale)));
  return m;
}
} // namespace

std::vector<double> VlasovSystem::speeds(ElementTable const &table, double t)
{
  ElementLayout const layout(table);
  auto const u = layout.gather(table);
  Field f      = field(layout, u);
  if (!refresh_every_stage_)
  {
    frozen_      = std::make_unique<Field>(f);
    frozen_time_ = t;
  }
  double const bound = total_bound(f, problem_, max_level_, basis_.degree(), t);
  double const vc    = problem_.velocity_cutoff;
  return {problem_.variant == VpVariant::standard ? vc : vc / problem_.eps_scale, bound};
}

void VlasovSystem::residual(ElementLayout const &layout, std::vector<double> const &u, double t,
                            std::vector<double> &out)
{
  Field f = (!refresh_every_stage_ && frozen_) ? *frozen_ : field(layout, u);
  double const bound = total_bound(f, problem_, max_level_, basis_.degree(), t);
  // the standard field has no explicit time dependence; bake t into the
  // oscillatory external field
  VelocityField a = vp_velocity_field(f.value, bound, problem_, t);
  a.time_dependent = false;
  DgOperator op(basis_, problem_.box,
                {problem_.variant == VpVariant::standard ? Boundary::periodic : Boundary::zero_inflow,
                 Boundary::zero_inflow},
                max_level_, std::move(a), flux_);
  op.apply(layout, u, t, out);
}

Diagnostics VlasovSystem::diagnostics(ElementTable const &table, double t) const
{
  Diagnostics d;
  d.time = t;
  d.dof  = table.dof();
  ElementLayout const layout(table);
  auto const u = layout.gather(table);
  for (double c : u)
    d.enstrophy_coeffs += c * c;

  auto const grid = TensorGrid::gauss(2, table.max_level(), basis_.degree() + 2);
  auto const fh   = evaluate_on_grid(table, basis_, problem_.box, grid);
  int const n1    = grid.points_per_dim();
  Box const &box  = problem_.box;
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b)
    {
      double const w = grid.weight(a) * grid.weight(b) * box.volume();
      double const v = box.to_physical(1, grid.reference(b));
      double const f = fh[static_cast<std::size_t>(a) * n1 + b];
      d.mass += w * f;
      d.momentum += w * v * f;
      d.enstrophy += w * f * f;
      d.energy += 0.5 * w * v * v * f;
    }
  d.energy += field(layout, u).energy;
  return d;
}

} // namespace amdg
