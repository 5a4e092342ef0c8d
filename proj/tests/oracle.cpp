#include "oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace oracle
{

Rule gauss(int n)
{
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i)
    J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i)
  {
    r.x.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
    r.w.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
  }
  return r;
}

namespace
{
// P_p and P_p' on [-1,1]
void legendre_pair(int p, double t, double &value, double &deriv)
{
  double p0 = 1, p1 = t, d0 = 0, d1 = 1;
  if (p == 0)
  {
    value = 1;
    deriv = 0;
    return;
  }
  for (int n = 1; n < p; ++n)
  {
    double const p2 = ((2 * n + 1) * t * p1 - n * p0) / (n + 1);
    double const d2 = d0 + (2 * n + 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  value = p1;
  deriv = d1;
}
} // namespace

double legendre01(int p, double x)
{
  double v, d;
  legendre_pair(p, 2 * x - 1, v, d);
  return std::sqrt(2.0 * p + 1) * v;
}

double legendre01_derivative(int p, double x)
{
  double v, d;
  legendre_pair(p, 2 * x - 1, v, d);
  return 2 * std::sqrt(2.0 * p + 1) * d;
}

void for_each_index(int dim, int extent, std::function<void(std::vector<int> const &)> const &f)
{
  std::vector<int> idx(dim, 0);
  while (true)
  {
    f(idx);
    int m = dim - 1;
    while (m >= 0 && idx[m] == extent - 1)
      idx[m--] = 0;
    if (m < 0)
      return;
    ++idx[m];
  }
}

DenseDG::DenseDG(int dim, int level, int degree, Field a, bool upwind, std::vector<double> alpha)
    : d_(dim), n_(level), k_(degree), np_(degree + 1), a_(std::move(a)), upwind_(upwind), alpha_(std::move(alpha))
{
  cells_ = modes_ = 1;
  for (int m = 0; m < d_; ++m)
  {
    cells_ *= std::size_t(1) << n_;
    modes_ *= np_;
  }
}

namespace
{
std::size_t flat(std::vector<int> const &idx, int extent)
{
  std::size_t f = 0;
  for (int v : idx)
    f = f * extent + v;
  return f;
}
} // namespace

std::vector<double> DenseDG::project(Function const &u, int points) const
{
  int const nc   = 1 << n_;
  double const h = 1.0 / nc;
  int const nq   = points > 0 ? points : np_;
  Rule const q   = gauss(nq);
  std::vector<double> out(size(), 0.0);
  std::vector<double> x(d_);
  for_each_index(d_, nc, [&](std::vector<int> const &c) {
    std::size_t const base = flat(c, nc) * modes_;
    for_each_index(d_, nq, [&](std::vector<int> const &qi) {
      double w = 1;
      for (int m = 0; m < d_; ++m)
      {
        x[m] = (c[m] + q.x[qi[m]]) * h;
        w *= q.w[qi[m]] * h;
      }
      double const val = u(x);
      for_each_index(d_, np_, [&](std::vector<int> const &a) {
        double v = 1;
        for (int m = 0; m < d_; ++m)
          v *= legendre01(a[m], q.x[qi[m]]) / std::sqrt(h);
        out[base + flat(a, np_)] += w * val * v;
      });
    });
  });
  return out;
}

void DenseDG::residual(std::vector<double> const &u, std::vector<double> &r) const
{
  int const nc   = 1 << n_;
  double const h = 1.0 / nc;
  double const s = std::pow(h, -0.5 * d_);  // basis scaling
  Rule const q   = gauss(k_ + 2);
  int const nq   = static_cast<int>(q.x.size());
  r.assign(size(), 0.0);
  std::vector<double> x(d_), xi(d_);

  auto value = [&](std::size_t cell, std::vector<double> const &ref) {
    double sum = 0;
    for_each_index(d_, np_, [&](std::vector<int> const &a) {
      double v = s;
      for (int m = 0; m < d_; ++m)
        v *= legendre01(a[m], ref[m]);
      sum += u[cell * modes_ + flat(a, np_)] * v;
    });
    return sum;
  };

  // volume terms
  for_each_index(d_, nc, [&](std::vector<int> const &c) {
    std::size_t const cell = flat(c, nc);
    for_each_index(d_, nq, [&](std::vector<int> const &qi) {
      double w = 1;
      for (int m = 0; m < d_; ++m)
      {
        xi[m] = q.x[qi[m]];
        x[m]  = (c[m] + xi[m]) * h;
        w *= q.w[qi[m]] * h;
      }
      double const uval = value(cell, xi);
      for_each_index(d_, np_, [&](std::vector<int> const &a) {
        double acc = 0;
        for (int m = 0; m < d_; ++m)
        {
          double g = s / h * legendre01_derivative(a[m], xi[m]);
          for (int n = 0; n < d_; ++n)
            if (n != m)
              g *= legendre01(a[n], xi[n]);
          acc += a_(m, x) * g;
        }
        r[cell * modes_ + flat(a, np_)] += w * uval * acc;
      });
    });
  });

  // faces between cell c and c + e_m
  for (int m = 0; m < d_; ++m)
    for_each_index(d_, nc, [&](std::vector<int> const &c) {
      std::vector<int> up = c;
      up[m]               = (c[m] + 1) % nc;
      std::size_t const lo_cell = flat(c, nc), up_cell = flat(up, nc);
      for_each_index(d_, nq, [&](std::vector<int> const &qi) {
        double w = 1;
        std::vector<double> xl(d_), xu(d_);
        for (int n = 0; n < d_; ++n)
        {
          if (n == m)
          {
            xl[n] = 1;
            xu[n] = 0;
            x[n]  = (c[n] + 1) * h;
          }
          else
          {
            xl[n] = xu[n] = q.x[qi[n]];
            x[n]          = (c[n] + xl[n]) * h;
            w *= q.w[qi[n]] * h;
          }
        }
        // only the first node is used along the normal direction
        if (qi[m] != 0)
          return;
        if (x[m] >= 1.0)
          x[m] -= 1.0;
        double const an = a_(m, x);
        double const um = value(lo_cell, xl), uq = value(up_cell, xu);
        double const flux = upwind_ ? (an >= 0 ? an * um : an * uq)
                                    : 0.5 * an * (um + uq) + 0.5 * alpha_[m] * (um - uq);
        for_each_index(d_, np_, [&](std::vector<int> const &a) {
          double vl = s, vu = s;
          for (int n = 0; n < d_; ++n)
          {
            vl *= legendre01(a[n], xl[n]);
            vu *= legendre01(a[n], xu[n]);
          }
          r[lo_cell * modes_ + flat(a, np_)] -= w * flux * vl;
          r[up_cell * modes_ + flat(a, np_)] += w * flux * vu;
        });
      });
    });
}

void DenseDG::rk3(std::vector<double> &u, double dt) const
{
  std::vector<double> r, u1(u.size()), u2(u.size());
  residual(u, r);
  for (std::size_t i = 0; i < u.size(); ++i)
    u1[i] = u[i] + dt * r[i];
  residual(u1, r);
  for (std::size_t i = 0; i < u.size(); ++i)
    u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * r[i]);
  residual(u2, r);
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = u[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * r[i]);
}

} // namespace oracle
