#include "amdg/problems.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amdg
{

namespace
{
constexpr double pi = std::numbers::pi;

double wrap(double x) { return x - std::floor(x); }

// square (or cube) of half-width h around c, with coordinates taken periodically
bool in_periodic_box(std::span<const double> x, std::vector<double> const &c, double h)
{
  for (std::size_t m = 0; m < x.size(); ++m)
  {
    double const dx = wrap(x[m] - c[m] + 0.5) - 0.5;
    if (std::abs(dx) > h)
      return false;
  }
  return true;
}

ScalarFunction cosine_bell(std::vector<double> center, double b)
{
  double const amp = std::pow(b, static_cast<double>(center.size()) - 1);
  return [center = std::move(center), b, amp](std::span<const double> x) {
    double r2 = 0;
    for (std::size_t m = 0; m < x.size(); ++m)
      r2 += (x[m] - center[m]) * (x[m] - center[m]);
    double const r = std::sqrt(r2);
    return r <= b ? amp * std::pow(std::cos(pi * r / (2 * b)), 6) : 0.0;
  };
}

ScalarFunction rotation_box()
{
  double const h = std::sqrt(2.0) / 10;
  return [h](std::span<const double> x) {
    return std::abs(x[0] - 0.75) <= h && std::abs(x[1] - 0.5) <= h ? 1.0 : 0.0;
  };
}

// u0 pulled back along the rotation flow by time t
ScalarFunction rotated(ScalarFunction u0, int dim, double t)
{
  if (dim == 2)
    return [u0, t](std::span<const double> x) {
      double const c = std::cos(t), s = std::sin(t);
      double const X = x[0] - 0.5, Y = x[1] - 0.5;
      std::array<double, 2> p{c * X + s * Y + 0.5, -s * X + c * Y + 0.5};
      return u0(p);
    };
  // rotation by angle -t about the unit axis (-1, 0, 1)/sqrt(2) through the center
  return [u0, t](std::span<const double> x) {
    double const s2 = std::sqrt(0.5);
    std::array<double, 3> const k{-s2, 0.0, s2};
    std::array<double, 3> const v{x[0] - 0.5, x[1] - 0.5, x[2] - 0.5};
    double const c = std::cos(-t), s = std::sin(-t);
    double const kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    std::array<double, 3> const kxv{k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]};
    std::array<double, 3> p{};
    for (int m = 0; m < 3; ++m)
      p[m] = v[m] * c + kxv[m] * s + k[m] * kv * (1 - c) + 0.5;
    return u0(p);
  };
}

VelocityField rotation_field(int dim)
{
  VelocityField a;
  a.dim = dim;
  a.components.resize(dim);
  auto shifted = [](double scale) { return [scale](double x) { return scale * (x - 0.5); }; };
  if (dim == 2)
  {
    a.components[0].push_back(FieldTerm{{}, {Function1D{}, shifted(-1.0)}});
    a.components[1].push_back(FieldTerm{{}, {shifted(1.0), Function1D{}}});
    a.speed_bounds = [](double) { return std::vector<double>{0.5, 0.5}; };
    return a;
  }
  double const s = std::sqrt(0.5);
  a.components[0].push_back(FieldTerm{{}, {Function1D{}, shifted(-s), Function1D{}}});
  a.components[1].push_back(FieldTerm{{}, {shifted(s), Function1D{}, Function1D{}}});
  a.components[1].push_back(FieldTerm{{}, {Function1D{}, Function1D{}, shifted(s)}});
  a.components[2].push_back(FieldTerm{{}, {Function1D{}, shifted(-s), Function1D{}}});
  a.speed_bounds = [s](double) { return std::vector<double>{0.5 * s, s, 0.5 * s}; };
  return a;
}

VelocityField deformation_field()
{
  double const period = 1.5;
  Function1D g        = [period](double t) { return std::cos(pi * t / period); };
  auto sin2 = [](double x) { return std::pow(std::sin(pi * x), 2); };
  auto sin_2pi = [](double x) { return std::sin(2 * pi * x); };
  VelocityField a;
  a.dim = 2;
  a.components.resize(2);
  a.components[0].push_back(FieldTerm{g, {sin2, sin_2pi}});
  a.components[1].push_back(FieldTerm{[g](double t) { return -g(t); }, {sin_2pi, sin2}});
  // bound over all times: the step size must not follow |g(t)| through its zero
  a.speed_bounds   = [](double) { return std::vector<double>{1.0, 1.0}; };
  a.time_dependent = true;
  return a;
}
} // namespace

TransportProblem transport_problem(std::string const &name, int dim)
{
  if (dim < 1 || dim > max_dim)
    throw std::invalid_argument("dimension must be in 1.." + std::to_string(max_dim));
  TransportProblem p;
  p.name       = name;
  p.box        = Box::unit(dim);
  p.boundaries.assign(dim, Boundary::periodic);

  if (name == "linear_smooth" || name == "linear_discontinuous")
  {
    p.field        = VelocityField::constant(std::vector<double>(dim, 1.0));
    p.default_flux = FluxKind::upwind;
    if (name == "linear_smooth")
    {
      p.initial = [](std::span<const double> x) {
        double v = 1;
        for (double xm : x)
          v *= std::pow(std::sin(pi * xm), 4);
        return v;
      };
      p.exact_at = [dim](double t) -> ScalarFunction {
        return [dim, t](std::span<const double> x) {
          double v = 1;
          for (int m = 0; m < dim; ++m)
            v *= std::pow(std::sin(pi * (x[m] - t)), 4);
          return v;
        };
      };
    }
    else
    {
      double const h = std::sqrt(6.0) / 10;
      std::vector<double> const c(dim, 0.5);
      p.initial  = [c, h](std::span<const double> x) { return in_periodic_box(x, c, h) ? 1.0 : 0.0; };
      p.exact_at = [c, h](double t) -> ScalarFunction {
        std::vector<double> ct = c;
        for (double &v : ct)
          v = wrap(v + t);
        return [ct, h](std::span<const double> x) { return in_periodic_box(x, ct, h) ? 1.0 : 0.0; };
      };
    }
    return p;
  }

  if (name == "rotation_bell" || name == "rotation_discontinuous")
  {
    if (dim != 2 && !(dim == 3 && name == "rotation_bell"))
      throw std::invalid_argument(name + " is defined for d = 2" + (name == "rotation_bell" ? " or 3" : ""));
    p.field   = rotation_field(dim);
    p.initial = name == "rotation_bell"
                    ? (dim == 2 ? cosine_bell({0.75, 0.5}, 0.23) : cosine_bell({0.5, 0.55, 0.5}, 0.45))
                    : rotation_box();
    p.exact_at = [u0 = p.initial, dim](double t) { return rotated(u0, dim, t); };
    return p;
  }

  if (name == "deformation_bell" || name == "deformation_discontinuous")
  {
    if (dim != 2)
      throw std::invalid_argument(name + " is defined for d = 2");
    p.field   = deformation_field();
    p.initial = name == "deformation_bell" ? cosine_bell({0.65, 0.5}, 0.35) : rotation_box();
    // the flow reverses with period 1.5
    p.exact_at = [u0 = p.initial](double t) -> ScalarFunction {
      double const cycles = t / 1.5;
      return std::abs(cycles - std::round(cycles)) < 1e-12 ? u0 : ScalarFunction{};
    };
    return p;
  }

  if (is_vlasov_problem(name))
    throw std::invalid_argument(name + " is a Vlasov-Poisson problem");
  throw std::invalid_argument("unknown problem '" + name + "'");
}

bool is_vlasov_problem(std::string const &name) { return name.rfind("vp_", 0) == 0; }

std::string vlasov_initial_name(std::string const &problem)
{
  if (problem == "vp_landau")
    return "landau";
  if (problem == "vp_bump_on_tail")
    return "bump_on_tail";
  if (problem == "vp_two_stream_1")
    return "two_stream_1";
  if (problem == "vp_two_stream_2")
    return "two_stream_2";
  if (problem == "vp_oscillatory_beam")
    return "beam";
  throw std::invalid_argument("unknown problem '" + problem + "'");
}

std::vector<std::string> problem_names()
{
  return {"linear_smooth",    "linear_discontinuous",      "rotation_bell",   "rotation_discontinuous",
          "deformation_bell", "deformation_discontinuous", "vp_landau",       "vp_bump_on_tail",
          "vp_two_stream_1",  "vp_two_stream_2",           "vp_oscillatory_beam"};
}

} // namespace amdg
