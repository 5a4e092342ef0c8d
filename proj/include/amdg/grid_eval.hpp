#pragma once

#include "amdg/basis.hpp"
#include "amdg/domain.hpp"
#include "amdg/element_table.hpp"
#include "amdg/projection.hpp"

#include <span>
#include <vector>

namespace amdg
{

/// Tensor grid made of the same per-cell points in every level-`level` cell.
struct TensorGrid
{
  int dim   = 1;
  int level = 0;
  std::vector<double> cell_points;   // relative positions in (0,1)
  std::vector<double> cell_weights;  // sum to one; empty when unused

  int points_per_dim() const { return (1 << level) * static_cast<int>(cell_points.size()); }
  std::size_t size() const;
  double reference(int p) const;  // reference coordinate of 1D point p
  double weight(int p) const;     // reference quadrature weight of 1D point p

  static TensorGrid gauss(int dim, int level, int points);
  static TensorGrid centers(int dim, int level);
};

// u_h at every grid point (dimension 0 slowest); the grid level must be at
// least the table's maximum level.
std::vector<double> evaluate_on_grid(ElementTable const &table, Basis1D const &basis, Box const &box,
                                     TensorGrid const &grid);

struct ErrorNorms
{
  double l1   = 0;
  double l2   = 0;
  double linf = 0;
};

// Errors by (k+2)-point Gauss quadrature on every level-N cell.
ErrorNorms solution_error(ElementTable const &table, Basis1D const &basis, Box const &box,
                          ScalarFunction const &exact);

// integral of u_h over the box (exact: only the root scaling mode contributes)
double solution_mass(ElementTable const &table, Box const &box);

} // namespace amdg
