#include "elnet/controllers.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace elnet::controllers {

namespace {

void require_spd(const MatrixXd& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(name) + " must be square");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument(std::string(name) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument(std::string(name) +
                                " must be positive definite");
  }
}

}  // namespace

void validate_gains(const GainConfig& gains, const NetworkGraph& g) {
  const int nn = g.num_vertices * g.agent_dim;
  require_spd(gains.Pi, "Pi");
  require_spd(gains.K, "K");
  require_spd(gains.K_zeta, "K_zeta");
  if (gains.Pi.rows() != nn || gains.K.rows() != nn) {
    throw std::invalid_argument("Pi/K must be N*n x N*n");
  }
  if (gains.K_zeta.rows() != g.agent_dim) {
    throw std::invalid_argument("K_zeta must be n x n");
  }
  if (g.num_edges() > 0) {
    require_spd(gains.Delta, "Delta");
    if (gains.Delta.rows() != g.num_edges()) {
      throw std::invalid_argument("Delta must be M x M");
    }
  }
  if (gains.ext_input_gain < 0.0) {
    throw std::invalid_argument("ext_input_gain must be >= 0");
  }
}

ReferenceTrajectory constant_reference(const VectorXd& q_d) {
  const Eigen::Index n = q_d.size();
  return {[q_d](double) { return q_d; },
          [n](double) { return VectorXd::Zero(n).eval(); },
          [n](double) { return VectorXd::Zero(n).eval(); }};
}

ReferenceTrajectory sinusoid_reference(const VectorXd& offset,
                                       const VectorXd& amplitude,
                                       const VectorXd& omega,
                                       const VectorXd& phase) {
  ReferenceTrajectory ref;
  ref.q_d = [=](double t) {
    return (offset.array() +
            amplitude.array() * (omega.array() * t + phase.array()).sin())
        .matrix()
        .eval();
  };
  ref.qdot_d = [=](double t) {
    return (amplitude.array() * omega.array() *
            (omega.array() * t + phase.array()).cos())
        .matrix()
        .eval();
  };
  ref.qddot_d = [=](double t) {
    return (-amplitude.array() * omega.array().square() *
            (omega.array() * t + phase.array()).sin())
        .matrix()
        .eval();
  };
  return ref;
}

ReferenceTrajectory polynomial_reference(const MatrixXd& coeffs) {
  auto horner = [coeffs](double t, int deriv) {
    const Eigen::Index n = coeffs.rows();
    const Eigen::Index deg = coeffs.cols() - 1;
    VectorXd out = VectorXd::Zero(n);
    for (Eigen::Index j = deg; j >= deriv; --j) {
      double fac = 1.0;
      for (int d = 0; d < deriv; ++d) fac *= static_cast<double>(j - d);
      out = out * t + fac * coeffs.col(j);
    }
    return out;
  };
  return {[horner](double t) { return horner(t, 0); },
          [horner](double t) { return horner(t, 1); },
          [horner](double t) { return horner(t, 2); }};
}

VectorXd slotine_li_single(const AgentModel& model, const VectorXd& q_i,
                           const VectorXd& v_i, const ReferenceTrajectory& ref,
                           double t, const MatrixXd& Pi_i, const MatrixXd& K_i,
                           const VectorXd& u_i) {
  VectorXd q_tilde = q_i - ref.q_d(t);
  VectorXd v_r = ref.qdot_d(t) - Pi_i * q_tilde;
  VectorXd vdot_r = ref.qddot_d(t) - Pi_i * (v_i - ref.qdot_d(t));
  VectorXd s = v_i - v_r;
  return model.mass_matrix(q_i) * vdot_r +
         model.coriolis_matrix(q_i, v_i) * v_r + model.gravity_vector(q_i) -
         K_i * s + u_i;
}

VectorXd backstepping_single(const AgentModel& model, const VectorXd& q_i,
                             const VectorXd& v_i,
                             const ReferenceTrajectory& ref, double t,
                             const MatrixXd& Pi_i, const MatrixXd& K_i,
                             const VectorXd& u_i) {
  VectorXd q_tilde = q_i - ref.q_d(t);
  return slotine_li_single(model, q_i, v_i, ref, t, Pi_i, K_i, u_i) -
         Pi_i * q_tilde;
}

std::pair<VectorXd, VectorXd> spring_edge_rhs(const EdgeSpringState& espring,
                                              const VectorXd& mu,
                                              const MatrixXd& K_zeta) {
  const int n = static_cast<int>(K_zeta.rows());
  if (espring.zeta.size() != espring.zeta_d.size() ||
      espring.zeta.size() != mu.size() || espring.zeta.size() % n != 0) {
    throw std::invalid_argument("spring_edge_rhs: shape mismatch");
  }
  const int num_edges = static_cast<int>(espring.zeta.size()) / n;
  VectorXd tau_edge(espring.zeta.size());
  for (int k = 0; k < num_edges; ++k) {
    tau_edge.segment(k * n, n) =
        K_zeta * (espring.zeta.segment(k * n, n) -
                  espring.zeta_d.segment(k * n, n));
  }
  return {mu - tau_edge, tau_edge};
}

std::pair<VectorXd, VectorXd> interconnect(const MatrixXd& B_lift,
                                           const VectorXd& y,
                                           const VectorXd& tau_edge) {
  if (y.size() != B_lift.rows() || tau_edge.size() != B_lift.cols()) {
    throw std::invalid_argument("interconnect: shape mismatch");
  }
  return {B_lift.transpose() * y, -B_lift * tau_edge};
}

NodeEdgeDerivatives node_edge_closed_loop_rhs(
    const std::vector<AgentModel>& models, const NetworkGraph& g,
    const NetworkState& state, const EdgeSpringState& espring,
    const GainConfig& gains, const ReferenceTrajectory& ref, Exec policy) {
  const int n = g.agent_dim;
  const int num_agents = g.num_vertices;
  MatrixXd b_lift = graph::kron_lift(graph::build_incidence(g), n);

  // Per-node sliding variables s_i = v_i - (qdot_d - Pi_i q~_i).
  VectorXd s(num_agents * n);
  VectorXd qdot_d = ref.qdot_d(state.t);
  VectorXd q_d = ref.q_d(state.t);
  for (int i = 0; i < num_agents; ++i) {
    VectorXd q_tilde_i = state.q.segment(i * n, n) - q_d;
    s.segment(i * n, n) = state.v.segment(i * n, n) - qdot_d +
                          gains.Pi.block(i * n, i * n, n, n) * q_tilde_i;
  }

  VectorXd mu = b_lift.transpose() * s;
  auto [zeta_dot, tau_edge] = spring_edge_rhs(espring, mu, gains.K_zeta);
  VectorXd u = -b_lift * tau_edge;

  NodeEdgeDerivatives out;
  out.zeta_dot = zeta_dot;
  out.tau.resize(num_agents * n);
  out.qdot.resize(num_agents * n);
  out.vdot.resize(num_agents * n);
  const bool par = policy == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < num_agents; ++i) {
    VectorXd tau_i = backstepping_single(
        models[i], state.q.segment(i * n, n), state.v.segment(i * n, n), ref,
        state.t, gains.Pi.block(i * n, i * n, n, n),
        gains.K.block(i * n, i * n, n, n), u.segment(i * n, n));
    auto [dq, dv] =
        dynamics::agent_rhs(models[i], state.q.segment(i * n, n),
                            state.v.segment(i * n, n), tau_i, i);
    out.tau.segment(i * n, n) = tau_i;
    out.qdot.segment(i * n, n) = dq;
    out.vdot.segment(i * n, n) = dv;
  }
  return out;
}

MatrixXd coupling_matrix(const NetworkGraph& g, const GainConfig& gains) {
  if (g.num_edges() == 0) return gains.Pi;
  MatrixXd b = graph::build_incidence(g);
  return gains.Pi +
         graph::kron_lift(b * gains.Delta * b.transpose(), g.agent_dim);
}

SlidingVariables sync_sliding(const NetworkGraph& g, const GainConfig& gains,
                              const NetworkState& state,
                              const ReferenceTrajectory& ref) {
  const int n = g.agent_dim;
  VectorXd ones_qd = VectorXd::Zero(g.num_vertices * n);
  VectorXd ones_qdotd = VectorXd::Zero(g.num_vertices * n);
  VectorXd q_d = ref.q_d(state.t);
  VectorXd qdot_d = ref.qdot_d(state.t);
  for (int i = 0; i < g.num_vertices; ++i) {
    ones_qd.segment(i * n, n) = q_d;
    ones_qdotd.segment(i * n, n) = qdot_d;
  }
  SlidingVariables out;
  out.q_tilde = state.q - ones_qd;
  out.v_r = ones_qdotd - coupling_matrix(g, gains) * out.q_tilde;
  out.s = state.v - out.v_r;
  return out;
}

namespace {

VectorXd sync_control_impl(const std::vector<AgentModel>& models,
                           const NetworkGraph& g, const GainConfig& gains,
                           const NetworkState& state,
                           const ReferenceTrajectory& ref, const VectorXd& u,
                           bool backstep) {
  const int n = g.agent_dim;
  SlidingVariables sv = sync_sliding(g, gains, state, ref);
  MatrixXd coupling = coupling_matrix(g, gains);

  VectorXd ones_qdotd(g.num_vertices * n), ones_qddotd(g.num_vertices * n);
  VectorXd qdot_d = ref.qdot_d(state.t);
  VectorXd qddot_d = ref.qddot_d(state.t);
  for (int i = 0; i < g.num_vertices; ++i) {
    ones_qdotd.segment(i * n, n) = qdot_d;
    ones_qddotd.segment(i * n, n) = qddot_d;
  }
  // vdot_r realized from measured velocity: no acceleration measurement.
  VectorXd vdot_r = ones_qddotd - coupling * (state.v - ones_qdotd);

  VectorXd tau(g.num_vertices * n);
  for (int i = 0; i < g.num_vertices; ++i) {
    VectorXd q_i = state.q.segment(i * n, n);
    VectorXd v_i = state.v.segment(i * n, n);
    tau.segment(i * n, n) =
        models[i].mass_matrix(q_i) * vdot_r.segment(i * n, n) +
        models[i].coriolis_matrix(q_i, v_i) * sv.v_r.segment(i * n, n) +
        models[i].gravity_vector(q_i);
  }
  tau += -gains.K * sv.s + u;
  if (backstep) tau -= coupling * sv.q_tilde;
  return tau;
}

}  // namespace

VectorXd sync_slotine_li_control(const std::vector<AgentModel>& models,
                                 const NetworkGraph& g, const GainConfig& gains,
                                 const NetworkState& state,
                                 const ReferenceTrajectory& ref,
                                 const VectorXd& u) {
  return sync_control_impl(models, g, gains, state, ref, u, false);
}

VectorXd sync_backstepping_control(const std::vector<AgentModel>& models,
                                   const NetworkGraph& g,
                                   const GainConfig& gains,
                                   const NetworkState& state,
                                   const ReferenceTrajectory& ref,
                                   const VectorXd& u) {
  return sync_control_impl(models, g, gains, state, ref, u, true);
}

}  // namespace elnet::controllers
