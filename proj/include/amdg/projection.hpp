#pragma once

#include "amdg/basis.hpp"
#include "amdg/domain.hpp"
#include "amdg/element_table.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace amdg
{

enum class NormChoice
{
  l1,
  l2,
  linf
};

NormChoice parse_norm(std::string const &name);
std::string to_string(NormChoice n);

struct ThresholdConfig
{
  double epsilon  = 1e-4;
  double eta      = 1e-5;
  NormChoice norm = NormChoice::l2;
  int max_level   = 7;
  int degree      = 2;

  // throws std::invalid_argument unless 0 < eta < epsilon
  void validate() const;
};

// u(x) at a physical point
using ScalarFunction = std::function<double(std::span<const double>)>;

// Level of the cells on which projection integrals are evaluated for a
// level-0 direction; finer elements use their own half cells.
int projection_quadrature_level(int dim, int max_level);

/// L2 coefficients of u against the element's basis functions on the box.
/// Each direction's support is split into cells of level max(l_m, q) and
/// integrated with k+2 Gauss points per cell.
std::vector<double> project_element(ScalarFunction const &u, ElementKey const &key, Basis1D const &basis,
                                    Box const &box, int quadrature_level);

/// Refinement indicator of one coefficient block (L2: block norm; L1/Linf:
/// sum of |u_i| times the norm of the physical basis function).
double element_indicator(std::span<const double> coeffs, ElementKey const &key, Basis1D const &basis,
                         NormChoice norm, Box const &box);

/// Top-down adaptive projection, pass-synchronous over the sorted leaf set.
ElementTable adaptive_project(ScalarFunction const &u, ThresholdConfig const &config, Basis1D const &basis,
                              Box const &box);

/// Projection onto a prescribed hole-free key set.
ElementTable project_onto(ScalarFunction const &u, std::vector<ElementKey> const &keys, int max_level,
                          Basis1D const &basis, Box const &box);

} // namespace amdg
