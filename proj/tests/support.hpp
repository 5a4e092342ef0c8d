#pragma once

#include "oracle.hpp"

#include "amdg/basis.hpp"
#include "amdg/domain.hpp"
#include "amdg/element_table.hpp"
#include "amdg/time_stepper.hpp"
#include "amdg/transport_operator.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace support
{

// hierarchical solution expressed in the dense cell basis
inline std::vector<double> to_dense(amdg::ElementTable const &table, amdg::Basis1D const &basis,
                                    amdg::Box const &box, oracle::DenseDG const &dg)
{
  std::vector<amdg::Side> side(table.dim(), amdg::Side::right);
  return dg.project([&](std::span<const double> x) { return amdg::eval_solution(table, basis, box, x, side); });
}

inline double relative_l2(std::vector<double> const &a, std::vector<double> const &b)
{
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

inline void randomize(amdg::ElementTable &table, unsigned seed)
{
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1, 1);
  for (auto const &key : table.sorted_keys())
    for (double &c : table.at(key).coeffs)
      c = dist(gen);
}

struct OracleCase
{
  int dim, level, degree;
  bool upwind;
  bool rotation;  // solid-body field instead of a constant one
};

// Runs the same problem on the full hierarchical space and on the dense
// oracle for `steps` RK3 steps; returns the relative L2 deviation.
double oracle_deviation(OracleCase const &c, int steps);

} // namespace support
