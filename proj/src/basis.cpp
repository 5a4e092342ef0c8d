#include "amdg/basis.hpp"
#include "amdg/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace amdg
{

namespace
{
// orthonormal Legendre polynomial on [0,1]
double unit_legendre(int p, double x) { return std::sqrt(2.0 * p + 1.0) * legendre(p, 2.0 * x - 1.0); }

double unit_legendre_derivative(int p, double x)
{
  return 2.0 * std::sqrt(2.0 * p + 1.0) * legendre_derivative(p, 2.0 * x - 1.0);
}

double eval_piece(std::span<const double> coeffs, double xi)
{
  double s = 0;
  for (std::size_t p = 0; p < coeffs.size(); ++p)
    s += coeffs[p] * unit_legendre(static_cast<int>(p), xi);
  return std::numbers::sqrt2 * s;
}

double eval_piece_derivative(std::span<const double> coeffs, double xi)
{
  double s = 0;
  for (std::size_t p = 0; p < coeffs.size(); ++p)
    s += coeffs[p] * unit_legendre_derivative(static_cast<int>(p), xi);
  return std::numbers::sqrt2 * s;
}

// roots of f on [a,b] found by sampling sign changes and bisection
std::vector<double> find_roots(std::function<double(double)> const &f, double a, double b)
{
  constexpr int samples = 4096;
  std::vector<double> roots;
  double xa = a, fa = f(a);
  for (int s = 1; s <= samples; ++s)
  {
    double const xb = a + (b - a) * s / samples;
    double const fb = f(xb);
    if (fa == 0.0)
      roots.push_back(xa);
    else if (fa * fb < 0)
    {
      double lo = xa, hi = xb, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it)
      {
        double const mid = 0.5 * (lo + hi);
        double const fm  = f(mid);
        if (fm == 0.0)
        {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0))
        {
          lo  = mid;
          flo = fm;
        }
        else
          hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    xa = xb;
    fa = fb;
  }
  return roots;
}

struct PieceNorms
{
  double l1   = 0;
  double linf = 0;
};

// L1 and Linf norms of a polynomial g on [a,b] of degree <= k
PieceNorms polynomial_norms(std::function<double(double)> const &g,
                            std::function<double(double)> const &dg, double a, double b, int k)
{
  PieceNorms n;
  auto const gq = gauss_quadrature(k + 1);

  std::vector<double> breaks{a};
  for (double r : find_roots(g, a, b))
    if (r > a && r < b)
      breaks.push_back(r);
  breaks.push_back(b);
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s)
  {
    double const lo = breaks[s], hi = breaks[s + 1];
    double integral = 0;
    for (int q = 0; q < gq.order; ++q)
      integral += gq.weights[q] * g(lo + (hi - lo) * gq.nodes[q]);
    n.l1 += std::abs(integral) * (hi - lo);
  }

  n.linf = std::max(std::abs(g(a)), std::abs(g(b)));
  for (double r : find_roots(dg, a, b))
    n.linf = std::max(n.linf, std::abs(g(r)));
  return n;
}
} // namespace

Basis1D::Basis1D(int degree) : degree_(degree)
{
  if (degree < 0 || degree > max_degree)
    throw std::invalid_argument("Basis1D: degree must be in [0," + std::to_string(max_degree) + "], got "
                                + std::to_string(degree));
  int const n  = degree + 1;
  int const n2 = 2 * n;

  // Coordinates: first n entries = left half, last n = right half, in the
  // orthonormal basis sqrt(2) L_p(2x) / sqrt(2) L_p(2x-1). In these
  // coordinates the L2(0,1) inner product is the Euclidean one.
  auto const gq = gauss_quadrature(2 * n + 2);
  auto coords   = [&](auto const &f) {
    Eigen::VectorXd c(n2);
    for (int p = 0; p < n; ++p)
    {
      double left = 0, right = 0;
      for (int q = 0; q < gq.order; ++q)
      {
        double const xi = gq.nodes[q];
        left += gq.weights[q] * f(0.5 * xi) * unit_legendre(p, xi);
        right += gq.weights[q] * f(0.5 + 0.5 * xi) * unit_legendre(p, xi);
      }
      c(p)     = left / std::numbers::sqrt2;
      c(n + p) = right / std::numbers::sqrt2;
    }
    return c;
  };

  Eigen::MatrixXd scaling_coords(n2, n);
  for (int i = 0; i < n; ++i)
    scaling_coords.col(i) = coords([i](double x) { return unit_legendre(i, x); });

  // orthonormal basis of the complement of the scaling span
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaling_coords);
  Eigen::MatrixXd const full_q = qr.householderQ() * Eigen::MatrixXd::Identity(n2, n2);
  Eigen::MatrixXd const w_basis = full_q.rightCols(n);

  // moments against Legendre polynomials of degree k+1..2k, in W coordinates
  Eigen::MatrixXd moments(n, std::max(degree, 0));
  for (int q = 0; q < degree; ++q)
  {
    int const deg = degree + 1 + q;
    moments.col(q) = w_basis.transpose() * coords([deg](double x) { return unit_legendre(deg, x); });
  }

  std::vector<Eigen::VectorXd> wavelets(n);
  for (int i = degree; i >= 0; --i)
  {
    // i moment constraints plus orthogonality to the wavelets already built
    Eigen::MatrixXd constraints(degree, n);
    int row = 0;
    for (int q = 0; q < i; ++q)
      constraints.row(row++) = moments.col(q).transpose();
    for (int o = i + 1; o <= degree; ++o)
      constraints.row(row++) = wavelets[o].transpose();

    Eigen::VectorXd w_coords;
    if (degree == 0)
      w_coords = Eigen::VectorXd::Ones(1);
    else
    {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
      w_coords = svd.matrixV().col(n - 1);
    }
    w_coords.normalize();
    wavelets[i] = w_coords;
  }

  left_.assign(n * n, 0.0);
  right_.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
  {
    Eigen::VectorXd c = w_basis * wavelets[i];
    // sign convention: positive limit at x -> 1^-
    double const at_one = eval_piece(std::span<const double>(c.data() + n, n), 1.0);
    if (std::abs(at_one) < 1e-10)
      throw std::logic_error("Basis1D: wavelet vanishes at the right endpoint, sign convention undefined");
    if (at_one < 0)
      c = -c;
    for (int p = 0; p < n; ++p)
    {
      left_[i * n + p]  = c(p);
      right_[i * n + p] = c(n + p);
    }
  }

  l1_scaling_.resize(n);
  linf_scaling_.resize(n);
  l1_wavelet_.resize(n);
  linf_wavelet_.resize(n);
  for (int i = 0; i < n; ++i)
  {
    auto const s = polynomial_norms([&](double x) { return unit_legendre(i, x); },
                                    [&](double x) { return unit_legendre_derivative(i, x); }, 0.0, 1.0, degree);
    l1_scaling_[i]   = s.l1;
    linf_scaling_[i] = s.linf;

    auto const lp = wavelet_piece(i, 0);
    auto const rp = wavelet_piece(i, 1);
    // pieces in the local variable xi in [0,1]; L1 picks up the half-width
    auto const l = polynomial_norms([&](double xi) { return eval_piece(lp, xi); },
                                    [&](double xi) { return eval_piece_derivative(lp, xi); }, 0.0, 1.0, degree);
    auto const r = polynomial_norms([&](double xi) { return eval_piece(rp, xi); },
                                    [&](double xi) { return eval_piece_derivative(rp, xi); }, 0.0, 1.0, degree);
    l1_wavelet_[i]   = 0.5 * (l.l1 + r.l1);
    linf_wavelet_[i] = std::max(l.linf, r.linf);
  }
}

double Basis1D::scaling(int i, double x) const { return unit_legendre(i, x); }

double Basis1D::wavelet(int i, double x, Side side) const
{
  bool const left_piece = x < 0.5 || (x == 0.5 && side == Side::left);
  if (left_piece)
    return eval_piece(wavelet_piece(i, 0), 2.0 * x);
  return eval_piece(wavelet_piece(i, 1), 2.0 * x - 1.0);
}

double Basis1D::scaling_derivative(int i, double x) const { return unit_legendre_derivative(i, x); }

double Basis1D::wavelet_derivative(int i, double x, Side side) const
{
  bool const left_piece = x < 0.5 || (x == 0.5 && side == Side::left);
  if (left_piece)
    return 2.0 * eval_piece_derivative(wavelet_piece(i, 0), 2.0 * x);
  return 2.0 * eval_piece_derivative(wavelet_piece(i, 1), 2.0 * x - 1.0);
}

std::span<const double> Basis1D::wavelet_piece(int i, int half) const
{
  auto const &v = half == 0 ? left_ : right_;
  return std::span<const double>(v.data() + i * size(), size());
}

double Basis1D::reference_l1(int i, bool wavelet) const { return wavelet ? l1_wavelet_.at(i) : l1_scaling_.at(i); }

double Basis1D::reference_linf(int i, bool wavelet) const
{
  return wavelet ? linf_wavelet_.at(i) : linf_scaling_.at(i);
}

namespace
{
// maps x into the reference support of (l, j); returns false outside the
// closed support or on the wrong side of an endpoint
bool to_reference(int level, int cell, double x, Side side, double &y)
{
  double const scale = level == 0 ? 1.0 : std::ldexp(1.0, level - 1);
  y                  = scale * x - cell;
  if (y < 0.0 || y > 1.0)
    return false;
  if (y == 0.0 && side == Side::left)
    return false;
  if (y == 1.0 && side == Side::right)
    return false;
  return true;
}

void check_indices(Basis1D const &basis, int i, int l, int j)
{
  if (i < 0 || i > basis.degree())
    throw std::out_of_range("basis function index out of range: " + std::to_string(i));
  if (l < 0 || l > 30)
    throw std::out_of_range("mesh level out of range: " + std::to_string(l));
  if (j < 0 || j >= cells_at_level(l))
    throw std::out_of_range("translation " + std::to_string(j) + " not in B_" + std::to_string(l));
}
} // namespace

void Basis1D::eval_all(int level, int cell, double x, Side side, std::span<double> out) const
{
  double y = 0;
  if (!to_reference(level, cell, x, side, y))
  {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (level == 0)
  {
    for (int i = 0; i < size(); ++i)
      out[i] = scaling(i, y);
    return;
  }
  double const amp = std::sqrt(std::ldexp(1.0, level - 1));
  for (int i = 0; i < size(); ++i)
    out[i] = amp * wavelet(i, y, side);
}

void Basis1D::eval_all_derivative(int level, int cell, double x, Side side, std::span<double> out) const
{
  double y = 0;
  if (!to_reference(level, cell, x, side, y))
  {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (level == 0)
  {
    for (int i = 0; i < size(); ++i)
      out[i] = scaling_derivative(i, y);
    return;
  }
  double const scale = std::ldexp(1.0, level - 1);
  double const amp   = std::sqrt(scale) * scale;
  for (int i = 0; i < size(); ++i)
    out[i] = amp * wavelet_derivative(i, y, side);
}

Basis1D build_basis(int k) { return Basis1D(k); }

double eval_1d(Basis1D const &basis, int i, int l, int j, double x, Side side)
{
  check_indices(basis, i, l, j);
  double y = 0;
  if (!to_reference(l, j, x, side, y))
    return 0.0;
  if (l == 0)
    return basis.scaling(i, y);
  return std::sqrt(std::ldexp(1.0, l - 1)) * basis.wavelet(i, y, side);
}

double eval_nd(Basis1D const &basis, std::span<const int> i, std::span<const int> l, std::span<const int> j,
               std::span<const double> x, std::span<const Side> side)
{
  std::size_t const d = i.size();
  if (l.size() != d || j.size() != d || x.size() != d || side.size() != d)
    throw std::invalid_argument("eval_nd: dimension mismatch among index and point vectors");
  double v = 1.0;
  for (std::size_t m = 0; m < d && v != 0.0; ++m)
    v *= eval_1d(basis, i[m], l[m], j[m], x[m], side[m]);
  return v;
}

BasisNorms basis_norms(Basis1D const &basis, std::span<const int> i, std::span<const int> l)
{
  if (i.size() != l.size())
    throw std::invalid_argument("basis_norms: dimension mismatch");
  BasisNorms n;
  n.l1   = 1.0;
  n.linf = 1.0;
  int shifted_sum = 0;
  for (std::size_t m = 0; m < i.size(); ++m)
  {
    check_indices(basis, i[m], l[m], 0);
    bool const wavelet = l[m] > 0;
    n.l1 *= basis.reference_l1(i[m], wavelet);
    n.linf *= basis.reference_linf(i[m], wavelet);
    shifted_sum += wavelet ? l[m] - 1 : 0;
  }
  n.l1 *= std::pow(2.0, -0.5 * shifted_sum);
  n.linf *= std::pow(2.0, 0.5 * shifted_sum);
  return n;
}

} // namespace amdg
