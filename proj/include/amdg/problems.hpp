#pragma once

#include "amdg/domain.hpp"
#include "amdg/projection.hpp"
#include "amdg/transport_operator.hpp"

#include <functional>
#include <string>
#include <vector>

namespace amdg
{

/// Registered linear transport benchmark.
struct TransportProblem
{
  std::string name;
  Box box;
  std::vector<Boundary> boundaries;
  VelocityField field;
  ScalarFunction initial;
  // exact solution at time t, or an empty function when none is known
  std::function<ScalarFunction(double)> exact_at;
  FluxKind default_flux = FluxKind::lax_friedrichs;
};

// linear_smooth, linear_discontinuous (any d); rotation_bell,
// rotation_discontinuous (d = 2, 3 for the bell); deformation_bell,
// deformation_discontinuous (d = 2)
TransportProblem transport_problem(std::string const &name, int dim);

// vp_landau, vp_bump_on_tail, vp_two_stream_1, vp_two_stream_2,
// vp_oscillatory_beam
bool is_vlasov_problem(std::string const &name);
std::string vlasov_initial_name(std::string const &problem);

std::vector<std::string> problem_names();

} // namespace amdg
