#pragma once

#include <vector>

namespace amdg
{

/// Gauss rule on the unit interval [0,1]; weights sum to one.
struct Quadrature
{
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [0,1], exact for polynomials of
// degree <= 2n-1. Supported orders: 1 <= n <= 20.
Quadrature gauss_quadrature(int n);

// Legendre polynomial P_n(x) on [-1,1] and its derivative.
double legendre(int n, double x);
double legendre_derivative(int n, double x);

} // namespace amdg
