#pragma once

#include <Eigen/Dense>
#include <functional>

#include "elnet/dynamics.hpp"
#include "elnet/graph.hpp"

namespace elnet::controllers {

using dynamics::AgentModel;
using dynamics::NetworkState;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using graph::NetworkGraph;

enum class Protocol {
  NodeEdgeSpring,
  SyncSlotineLi,
  SyncBackstepping,
  SingleSlotineLi,
  SingleBackstepping,
};

/// Gain set for the distributed laws. Pi and K are N*n x N*n block-diagonal
/// (blocks Pi_i, K_i); Delta is the M x M diagonal of edge coupling weights;
/// K_zeta is the n x n edge spring stiffness, shared by all edges.
struct GainConfig {
  MatrixXd Pi;
  MatrixXd K;
  MatrixXd Delta;
  MatrixXd K_zeta;
  // Optional passive output feedback hook u = -ext_input_gain * s.
  double ext_input_gain = 0.0;
};

/// Throws std::invalid_argument unless every gain matrix is symmetric
/// (to 1e-12) and positive definite, with shapes consistent with (N, n, M).
void validate_gains(const GainConfig& gains, const NetworkGraph& g);

/// Common reference q_d(t) with derivatives, C^2 on the horizon.
struct ReferenceTrajectory {
  std::function<VectorXd(double)> q_d;
  std::function<VectorXd(double)> qdot_d;
  std::function<VectorXd(double)> qddot_d;
};

ReferenceTrajectory constant_reference(const VectorXd& q_d);
ReferenceTrajectory sinusoid_reference(const VectorXd& offset,
                                       const VectorXd& amplitude,
                                       const VectorXd& omega,
                                       const VectorXd& phase);
/// q_d(t) = sum_j coeffs[j] * t^j per coordinate; coeffs is n x (deg+1).
ReferenceTrajectory polynomial_reference(const MatrixXd& coeffs);

/// Edge spring states, stacked per edge (length M*n each).
struct EdgeSpringState {
  VectorXd zeta;
  VectorXd zeta_d;
};

struct SlidingVariables {
  VectorXd q_tilde;  // q - 1_N (x) q_d
  VectorXd v_r;      // network velocity reference
  VectorXd s;        // v - v_r
};

/// Slotine-Li tracking law for one agent:
/// tau = M*vdot_r + C*v_r + g - K_i*s + u, with
/// v_r = qdot_d - Pi_i*(q - q_d), s = v - v_r.
VectorXd slotine_li_single(const AgentModel& model, const VectorXd& q_i,
                           const VectorXd& v_i, const ReferenceTrajectory& ref,
                           double t, const MatrixXd& Pi_i, const MatrixXd& K_i,
                           const VectorXd& u_i);

/// Backstepping redesign: slotine_li_single with the extra -Pi_i*(q - q_d).
VectorXd backstepping_single(const AgentModel& model, const VectorXd& q_i,
                             const VectorXd& v_i,
                             const ReferenceTrajectory& ref, double t,
                             const MatrixXd& Pi_i, const MatrixXd& K_i,
                             const VectorXd& u_i);

/// Spring system on each edge with quadratic potential
/// P_zeta,k = 1/2 (zeta_k - zeta_d)^T K_zeta (zeta_k - zeta_d):
/// zeta_dot_k = mu_k - K_zeta*(zeta_k - zeta_d), tau_k = K_zeta*(zeta_k - zeta_d).
std::pair<VectorXd, VectorXd> spring_edge_rhs(const EdgeSpringState& espring,
                                              const VectorXd& mu,
                                              const MatrixXd& K_zeta);

/// Power-preserving node/edge interconnection:
/// mu = (B^T (x) I_n) y, u = -(B (x) I_n) tau_edge.
std::pair<VectorXd, VectorXd> interconnect(const MatrixXd& B_lift,
                                           const VectorXd& y,
                                           const VectorXd& tau_edge);

struct NodeEdgeDerivatives {
  VectorXd qdot;
  VectorXd vdot;
  VectorXd zeta_dot;
  VectorXd tau;  // applied node torques, for trace recording
};

/// Node-&-edge spring protocol: per-node backstepping laws interconnected
/// with the edge springs through mu = (B^T (x) I_n) s, u = -(B (x) I_n) tau_edge.
NodeEdgeDerivatives node_edge_closed_loop_rhs(
    const std::vector<AgentModel>& models, const NetworkGraph& g,
    const NetworkState& state, const EdgeSpringState& espring,
    const GainConfig& gains, const ReferenceTrajectory& ref,
    Exec policy = Exec::Serial);

/// [Pi + B Delta B^T] (x) I_n acting on stacked coordinates.
MatrixXd coupling_matrix(const NetworkGraph& g, const GainConfig& gains);

/// Sliding variables of the synchronized laws:
/// v_r = 1 (x) qdot_d - ([Pi + B Delta B^T] (x) I_n) q_tilde, s = v - v_r.
SlidingVariables sync_sliding(const NetworkGraph& g, const GainConfig& gains,
                              const NetworkState& state,
                              const ReferenceTrajectory& ref);

/// Synchronized Slotine-Li law tau = M*vdot_r + C*v_r + g - K*s + u with
/// vdot_r = 1 (x) qddot_d - ([Pi + B Delta B^T] (x) I_n)(v - 1 (x) qdot_d).
VectorXd sync_slotine_li_control(const std::vector<AgentModel>& models,
                                 const NetworkGraph& g, const GainConfig& gains,
                                 const NetworkState& state,
                                 const ReferenceTrajectory& ref,
                                 const VectorXd& u);

/// Backstepping redesign: adds -([Pi + B Delta B^T] (x) I_n) q_tilde.
VectorXd sync_backstepping_control(const std::vector<AgentModel>& models,
                                   const NetworkGraph& g,
                                   const GainConfig& gains,
                                   const NetworkState& state,
                                   const ReferenceTrajectory& ref,
                                   const VectorXd& u);

}  // namespace elnet::controllers
