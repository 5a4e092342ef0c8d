#include "amdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace amdg
{

namespace
{
// P_n and P_{n-1} via the three-term recurrence
std::pair<double, double> legendre_pair(int n, double x)
{
  double p0 = 1.0, p1 = x;
  if (n == 0)
    return {1.0, 0.0};
  for (int m = 2; m <= n; ++m)
  {
    double const p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}
} // namespace

double legendre(int n, double x) { return legendre_pair(n, x).first; }

double legendre_derivative(int n, double x)
{
  if (n == 0)
    return 0.0;
  if (std::abs(x) == 1.0)
    return 0.5 * n * (n + 1) * std::pow(x, n + 1);
  auto const [pn, pm] = legendre_pair(n, x);
  return n * (x * pn - pm) / (x * x - 1.0);
}

Quadrature gauss_quadrature(int n)
{
  if (n < 1 || n > 20)
    throw std::invalid_argument("gauss_quadrature: order must be in [1,20], got " + std::to_string(n));

  Quadrature q;
  q.order = n;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    // Chebyshev-like initial guess, refined by Newton
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it)
    {
      double const dx = legendre(n, x) / legendre_derivative(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    double const dp = legendre_derivative(n, x);
    double const w  = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]; keep nodes ascending
    q.nodes[i]         = 0.5 * (1.0 - x);
    q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    q.weights[i]         = 0.5 * w;
    q.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1)
    q.nodes[n / 2] = 0.5;
  return q;
}

} // namespace amdg
