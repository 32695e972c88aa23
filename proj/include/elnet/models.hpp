#pragma once

#include <map>
#include <string>

#include "elnet/dynamics.hpp"

namespace elnet::models {

using dynamics::AgentModel;

/// n=1, M = mass, C = 0, g = 0, P = 0.
AgentModel make_double_integrator(double mass);

/// n=1 point-mass pendulum: M = m*l^2, C = 0,
/// P = m*g*l*(1 - cos q), g(q) = m*g*l*sin q.
AgentModel make_pendulum(double mass, double length, double gravity);

/// n=2 planar two-link point-mass manipulator, C from the Christoffel
/// symbols of M. Mass eigenvalue bounds are scanned over the joint range at
/// construction.
AgentModel make_two_link(double m1, double m2, double l1, double l2,
                         double gravity);

/// Constructs a catalog model by name from named scalar parameters.
/// Known names: "double_integrator", "pendulum", "two_link".
/// Throws std::invalid_argument on unknown name, missing/extra parameter,
/// or nonpositive value.
AgentModel make_from_catalog(const std::string& name,
                             const std::map<std::string, double>& params);

}  // namespace elnet::models
