#include "amdg/projection.hpp"
#include "amdg/quadrature.hpp"
#include "amdg/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amdg
{

NormChoice parse_norm(std::string const &name)
{
  if (name == "l1" || name == "L1")
    return NormChoice::l1;
  if (name == "l2" || name == "L2")
    return NormChoice::l2;
  if (name == "linf" || name == "Linf" || name == "inf")
    return NormChoice::linf;
  throw std::invalid_argument("unknown norm '" + name + "' (expected l1, l2 or linf)");
}

std::string to_string(NormChoice n)
{
  switch (n)
  {
  case NormChoice::l1: return "l1";
  case NormChoice::l2: return "l2";
  case NormChoice::linf: return "linf";
  }
  return "?";
}

void ThresholdConfig::validate() const
{
  if (!(epsilon > 0))
    throw std::invalid_argument("epsilon must be positive");
  if (!(eta > 0) || !(eta < epsilon))
    throw std::invalid_argument("eta must satisfy 0 < eta < epsilon");
  if (max_level < 0)
    throw std::invalid_argument("max level must be nonnegative");
  if (degree < 0 || degree > Basis1D::max_degree)
    throw std::invalid_argument("unsupported degree");
}

int projection_quadrature_level(int dim, int max_level)
{
  return std::max(1, std::min(max_level, 12 / dim));
}

std::vector<double> project_element(ScalarFunction const &u, ElementKey const &key, Basis1D const &basis,
                                    Box const &box, int quadrature_level)
{
  int const d  = key.dim;
  int const np = basis.size();
  auto const gq = gauss_quadrature(basis.degree() + 2);

  // per direction: physical points and weighted basis values (np x points)
  std::vector<std::vector<double>> points(d), weighted(d);
  std::vector<int> shape(d);
  for (int m = 0; m < d; ++m)
  {
    int const l     = key.level[m];
    int const j     = key.cell[m];
    int const level = std::max(l, quadrature_level);
    double const a  = support_lower(l, j);
    double const b  = support_upper(l, j);
    int const cells = static_cast<int>(std::lround((b - a) * std::ldexp(1.0, level)));
    double const h  = (b - a) / cells;
    int const n     = cells * gq.order;
    points[m].resize(n);
    weighted[m].resize(static_cast<std::size_t>(np) * n);
    std::vector<double> vals(np);
    for (int c = 0; c < cells; ++c)
      for (int q = 0; q < gq.order; ++q)
      {
        int const p     = c * gq.order + q;
        double const xi = a + h * (c + gq.nodes[q]);
        points[m][p]    = box.to_physical(m, xi);
        basis.eval_all(l, j, xi, Side::right, vals);
        for (int i = 0; i < np; ++i)
          weighted[m][static_cast<std::size_t>(i) * n + p] = vals[i] * gq.weights[q] * h;
      }
    shape[m] = n;
  }

  std::vector<double> f(tensor_size(shape));
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < f.size(); ++flat)
  {
    for (int m = 0; m < d; ++m)
      x[m] = points[m][idx[m]];
    f[flat] = u(x);
    for (int m = d - 1; m >= 0; --m)
    {
      if (++idx[m] < shape[m])
        break;
      idx[m] = 0;
    }
  }

  std::vector<double> tmp;
  for (int m = 0; m < d; ++m)
  {
    contract_mode(f, shape, m, weighted[m].data(), np, tmp);
    f.swap(tmp);
  }
  double const scale = std::sqrt(box.volume());
  for (double &c : f)
    c *= scale;
  return f;
}

double element_indicator(std::span<const double> coeffs, ElementKey const &key, Basis1D const &basis,
                         NormChoice norm, Box const &box)
{
  if (norm == NormChoice::l2)
  {
    double s = 0;
    for (double c : coeffs)
      s += c * c;
    return std::sqrt(s);
  }
  int const d  = key.dim;
  int const np = basis.size();
  // 1D factors of the physical basis norms
  std::vector<std::vector<double>> factor(d, std::vector<double>(np));
  for (int m = 0; m < d; ++m)
  {
    int const l        = key.level[m];
    bool const wavelet = l > 0;
    int const shift    = wavelet ? l - 1 : 0;
    for (int i = 0; i < np; ++i)
    {
      if (norm == NormChoice::l1)
        factor[m][i] = basis.reference_l1(i, wavelet) * std::pow(2.0, -0.5 * shift) * std::sqrt(box.extent(m));
      else
        factor[m][i] = basis.reference_linf(i, wavelet) * std::pow(2.0, 0.5 * shift) / std::sqrt(box.extent(m));
    }
  }
  double s = 0;
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < coeffs.size(); ++flat)
  {
    double w = 1.0;
    for (int m = 0; m < d; ++m)
      w *= factor[m][idx[m]];
    s += std::abs(coeffs[flat]) * w;
    for (int m = d - 1; m >= 0; --m)
    {
      if (++idx[m] < np)
        break;
      idx[m] = 0;
    }
  }
  return s;
}

ElementTable adaptive_project(ScalarFunction const &u, ThresholdConfig const &config, Basis1D const &basis,
                              Box const &box)
{
  config.validate();
  if (config.degree != basis.degree())
    throw std::invalid_argument("threshold config degree does not match basis");
  int const d = box.dim();
  int const q = projection_quadrature_level(d, config.max_level);
  ElementTable table(d, config.degree, config.max_level);

  auto const root = ElementKey::root(d);
  table.insert(root).coeffs = project_element(u, root, basis, box, q);

  std::vector<ElementKey> frontier{root};
  while (!frontier.empty())
  {
    std::vector<ElementKey> added;
    for (auto const &key : frontier)
    {
      auto const &e = table.at(key);
      if (element_indicator(e.coeffs, key, basis, config.norm, box) <= config.epsilon)
        continue;
      for (auto const &c : children(key, config.max_level))
        for (auto const &k : table.insert_with_ancestors(c))
        {
          // missing co-parents of the child come in with their projections
          table.at(k).coeffs = project_element(u, k, basis, box, q);
          added.push_back(k);
        }
    }
    frontier.assign(table.leaves().begin(), table.leaves().end());
    if (added.empty())
      break;
  }
  return table;
}

ElementTable project_onto(ScalarFunction const &u, std::vector<ElementKey> const &keys, int max_level,
                          Basis1D const &basis, Box const &box)
{
  if (keys.empty())
    throw std::invalid_argument("project_onto: empty key set");
  int const d = keys.front().dim;
  int const q = projection_quadrature_level(d, max_level);
  ElementTable table(d, basis.degree(), max_level);
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end(), [](ElementKey const &a, ElementKey const &b) {
    if (a.level_sum() != b.level_sum())
      return a.level_sum() < b.level_sum();
    return CanonicalLess{}(a, b);
  });
  for (auto const &k : sorted)
    table.insert(k).coeffs = project_element(u, k, basis, box, q);
  return table;
}

} // namespace amdg
