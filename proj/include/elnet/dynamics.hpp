#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "elnet/exec.hpp"

namespace elnet::dynamics {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Euler-Lagrange agent M(q)*vdot + C(q,v)*v + g(q) = tau. Evaluators must
/// be pure. C must be Christoffel-parametrized so that Mdot - 2C is
/// skew-symmetric, not just workless.
struct AgentModel {
  int dof = 1;
  std::function<MatrixXd(const VectorXd&)> mass_matrix;
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> coriolis_matrix;
  std::function<VectorXd(const VectorXd&)> gravity_vector;
  std::function<double(const VectorXd&)> potential;
  // m_low*I <= M(q) <= m_high*I over the documented working range.
  double mass_eig_low = 0.0;
  double mass_eig_high = 0.0;
};

struct NetworkState {
  VectorXd q;   // stacked, length N*n
  VectorXd v;   // stacked, length N*n
  double t = 0.0;
};

struct VirtualState {
  VectorXd r;
  VectorXd s;
};

/// Solves M(q)*x = b with an SPD eigendecomposition and a condition-number
/// guard at 1e12. Throws std::runtime_error naming agent_index when the mass
/// matrix is numerically singular.
VectorXd solve_mass(const AgentModel& model, const VectorXd& q_i,
                    const VectorXd& b, int agent_index = -1);

/// (qdot_i, vdot_i) of a single agent.
std::pair<VectorXd, VectorXd> agent_rhs(const AgentModel& model,
                                        const VectorXd& q_i,
                                        const VectorXd& v_i,
                                        const VectorXd& tau_i,
                                        int agent_index = -1);

/// Block-diagonal assembly of agent_rhs over the network. Agents are
/// independent; the Parallel policy splits the loop over agents and is
/// bitwise identical to Serial.
std::pair<VectorXd, VectorXd> network_rhs(const std::vector<AgentModel>& models,
                                          const NetworkState& state,
                                          const VectorXd& tau,
                                          Exec policy = Exec::Serial);

/// Directional derivative of the mass matrix along v_i, central difference
/// with step h, Richardson-extrapolated once.
MatrixXd mass_matrix_dot(const AgentModel& model, const VectorXd& q_i,
                         const VectorXd& v_i, double h = 1e-6);

/// w^T (Mdot - 2C) w; zero for skew-symmetric Mdot - 2C.
double skew_defect(const AgentModel& model, const VectorXd& q_i,
                   const VectorXd& v_i, const VectorXd& w);

/// H*(q,v) = 1/2 v^T M(q) v + sum_i P_i(q_i).
double total_coenergy(const std::vector<AgentModel>& models,
                      const NetworkState& state);

/// Virtual system in (r,s) parametrized by the measured (q_i, v_i):
/// rdot = s, M(q_i)*sdot + C(q_i,v_i)*s + g(r) = u_bar.
std::pair<VectorXd, VectorXd> virtual_rhs(const AgentModel& model,
                                          const VectorXd& q_i,
                                          const VectorXd& v_i,
                                          const VirtualState& vstate,
                                          const VectorXd& u_bar_i,
                                          int agent_index = -1);

}  // namespace elnet::dynamics
