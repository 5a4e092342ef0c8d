#pragma once

#include <string>
#include <vector>

namespace amdg
{

/// Axis-aligned box; the solver works in reference coordinates on [0,1]^d.
struct Box
{
  std::vector<double> lower;
  std::vector<double> upper;

  static Box unit(int dim);

  int dim() const { return static_cast<int>(lower.size()); }
  double extent(int m) const { return upper[m] - lower[m]; }
  double volume() const;
  double to_physical(int m, double xi) const { return lower[m] + extent(m) * xi; }
  double to_reference(int m, double x) const { return (x - lower[m]) / extent(m); }
};

enum class Boundary
{
  periodic,
  zero_inflow  // ghost trace 0 outside the box
};

Boundary parse_boundary(std::string const &name);

} // namespace amdg
