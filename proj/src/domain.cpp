#include "amdg/domain.hpp"

#include <stdexcept>

namespace amdg
{

Box Box::unit(int dim) { return Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)}; }

double Box::volume() const
{
  double v = 1.0;
  for (int m = 0; m < dim(); ++m)
    v *= extent(m);
  return v;
}

Boundary parse_boundary(std::string const &name)
{
  if (name == "periodic")
    return Boundary::periodic;
  if (name == "zero_inflow" || name == "zero")
    return Boundary::zero_inflow;
  throw std::invalid_argument("unknown boundary kind '" + name + "'");
}

} // namespace amdg
