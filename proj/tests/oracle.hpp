#pragma once

// Reference implementations for the tests. Nothing here calls into the
// library's quadrature, basis or operator code.

#include <functional>
#include <span>
#include <vector>

namespace oracle
{

struct Rule
{
  std::vector<double> x, w;  // on [0,1]
};

// Golub-Welsch
Rule gauss(int n);

// orthonormal Legendre polynomials on [0,1] by the three-term recurrence
double legendre01(int p, double x);
double legendre01_derivative(int p, double x);

using Field = std::function<double(int m, std::span<const double> x)>;
using Function = std::function<double(std::span<const double> x)>;

/// DG on a uniform mesh of [0,1]^d with 2^N periodic cells per direction and
/// the tensor orthonormal Legendre basis on each cell. Vector layout: cell
/// (direction 0 slowest), then mode (direction 0 slowest).
class DenseDG
{
public:
  DenseDG(int dim, int level, int degree, Field a, bool upwind, std::vector<double> alpha);

  std::size_t size() const { return cells_ * modes_; }
  // L2 projection with `points` Gauss points per direction and cell (default k+1)
  std::vector<double> project(Function const &u, int points = 0) const;
  void residual(std::vector<double> const &u, std::vector<double> &r) const;
  void rk3(std::vector<double> &u, double dt) const;

  int dim() const { return d_; }
  int level() const { return n_; }
  int degree() const { return k_; }

private:
  int d_, n_, k_, np_;
  std::size_t cells_, modes_;
  Field a_;
  bool upwind_;
  std::vector<double> alpha_;
};

// visits all tuples in [0, extent)^dim, last entry fastest
void for_each_index(int dim, int extent, std::function<void(std::vector<int> const &)> const &f);

} // namespace oracle
