#include "amdg/grid_eval.hpp"
#include "amdg/quadrature.hpp"
#include "amdg/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amdg
{

std::size_t TensorGrid::size() const
{
  std::size_t n = 1;
  for (int m = 0; m < dim; ++m)
    n *= points_per_dim();
  return n;
}

double TensorGrid::reference(int p) const
{
  int const per = static_cast<int>(cell_points.size());
  return std::ldexp(p / per + cell_points[p % per], -level);
}

double TensorGrid::weight(int p) const
{
  int const per = static_cast<int>(cell_points.size());
  return std::ldexp(cell_weights[p % per], -level);
}

TensorGrid TensorGrid::gauss(int dim, int level, int points)
{
  auto const q = gauss_quadrature(points);
  return TensorGrid{dim, level, q.nodes, q.weights};
}

TensorGrid TensorGrid::centers(int dim, int level) { return TensorGrid{dim, level, {0.5}, {1.0}}; }

std::vector<double> evaluate_on_grid(ElementTable const &table, Basis1D const &basis, Box const &box,
                                     TensorGrid const &grid)
{
  int const d = table.dim();
  if (grid.dim != d)
    throw std::invalid_argument("evaluate_on_grid: grid dimension mismatch");
  if (grid.level < table.max_level())
    throw std::invalid_argument("evaluate_on_grid: grid coarser than the table's finest level");
  int const np   = basis.size();
  int const per  = static_cast<int>(grid.cell_points.size());
  int const n1   = grid.points_per_dim();
  double const s = 1.0 / std::sqrt(box.volume());

  std::vector<double> out(grid.size(), 0.0);
  std::vector<std::vector<double>> mats(d);
  std::vector<int> first(d), count(d), shape(d);
  std::vector<double> vals(np), local, tmp;
  for (auto const &[key, e] : table)
  {
    for (int m = 0; m < d; ++m)
    {
      int const l = key.level[m], j = key.cell[m];
      int const c0 = static_cast<int>(std::lround(support_lower(l, j) * (1 << grid.level)));
      int const c1 = static_cast<int>(std::lround(support_upper(l, j) * (1 << grid.level)));
      first[m]     = c0 * per;
      count[m]     = (c1 - c0) * per;
      mats[m].assign(static_cast<std::size_t>(count[m]) * np, 0.0);
      for (int p = 0; p < count[m]; ++p)
      {
        basis.eval_all(l, j, grid.reference(first[m] + p), Side::right, vals);
        for (int i = 0; i < np; ++i)
          mats[m][static_cast<std::size_t>(p) * np + i] = vals[i];
      }
      shape[m] = np;
    }
    local = e.coeffs;
    for (int m = 0; m < d; ++m)
    {
      contract_mode(local, shape, m, mats[m].data(), count[m], tmp);
      local.swap(tmp);
    }
    // scatter the local box into the global grid
    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < local.size(); ++flat)
    {
      std::size_t g = 0;
      for (int m = 0; m < d; ++m)
        g = g * n1 + (first[m] + idx[m]);
      out[g] += s * local[flat];
      for (int m = d - 1; m >= 0; --m)
      {
        if (++idx[m] < count[m])
          break;
        idx[m] = 0;
      }
    }
  }
  return out;
}

ErrorNorms solution_error(ElementTable const &table, Basis1D const &basis, Box const &box,
                          ScalarFunction const &exact)
{
  int const d = table.dim();
  auto const grid = TensorGrid::gauss(d, table.max_level(), basis.degree() + 2);
  auto const uh   = evaluate_on_grid(table, basis, box, grid);
  int const n1    = grid.points_per_dim();
  ErrorNorms err;
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double const vol = box.volume();
  for (std::size_t flat = 0; flat < uh.size(); ++flat)
  {
    double w = vol;
    for (int m = 0; m < d; ++m)
    {
      x[m] = box.to_physical(m, grid.reference(idx[m]));
      w *= grid.weight(idx[m]);
    }
    double const e = std::abs(uh[flat] - exact(x));
    err.l1 += w * e;
    err.l2 += w * e * e;
    err.linf = std::max(err.linf, e);
    for (int m = d - 1; m >= 0; --m)
    {
      if (++idx[m] < n1)
        break;
      idx[m] = 0;
    }
  }
  err.l2 = std::sqrt(err.l2);
  return err;
}

double solution_mass(ElementTable const &table, Box const &box)
{
  auto const &root = table.at(ElementKey::root(table.dim()));
  return root.coeffs[0] * std::sqrt(box.volume());
}

} // namespace amdg
