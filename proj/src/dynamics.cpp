#include "elnet/dynamics.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace elnet::dynamics {

namespace {

std::string agent_tag(int agent_index) {
  return agent_index >= 0 ? " (agent " + std::to_string(agent_index) + ")" : "";
}

}  // namespace

VectorXd solve_mass(const AgentModel& model, const VectorXd& q_i,
                    const VectorXd& b, int agent_index) {
  MatrixXd m = model.mass_matrix(q_i);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
  const auto& lam = eig.eigenvalues();
  double lo = lam.minCoeff();
  double hi = lam.maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw std::runtime_error("mass matrix numerically singular" +
                             agent_tag(agent_index));
  }
  return eig.eigenvectors() *
         (eig.eigenvectors().transpose() * b).cwiseQuotient(lam);
}

std::pair<VectorXd, VectorXd> agent_rhs(const AgentModel& model,
                                        const VectorXd& q_i,
                                        const VectorXd& v_i,
                                        const VectorXd& tau_i,
                                        int agent_index) {
  VectorXd rhs = tau_i - model.coriolis_matrix(q_i, v_i) * v_i -
                 model.gravity_vector(q_i);
  return {v_i, solve_mass(model, q_i, rhs, agent_index)};
}

std::pair<VectorXd, VectorXd> network_rhs(const std::vector<AgentModel>& models,
                                          const NetworkState& state,
                                          const VectorXd& tau, Exec policy) {
  const int num_agents = static_cast<int>(models.size());
  if (num_agents == 0) throw std::invalid_argument("network_rhs: no models");
  const int n = models.front().dof;
  if (state.q.size() != num_agents * n || state.v.size() != num_agents * n ||
      tau.size() != num_agents * n) {
    throw std::invalid_argument("network_rhs: stacked length mismatch");
  }
  VectorXd qdot(num_agents * n), vdot(num_agents * n);
  const bool par = policy == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < num_agents; ++i) {
    auto [dq, dv] = agent_rhs(models[i], state.q.segment(i * n, n),
                              state.v.segment(i * n, n),
                              tau.segment(i * n, n), i);
    qdot.segment(i * n, n) = dq;
    vdot.segment(i * n, n) = dv;
  }
  return {qdot, vdot};
}

MatrixXd mass_matrix_dot(const AgentModel& model, const VectorXd& q_i,
                         const VectorXd& v_i, double h) {
  auto central = [&](double step) {
    return ((model.mass_matrix(q_i + step * v_i) -
             model.mass_matrix(q_i - step * v_i)) /
            (2.0 * step)).eval();
  };
  // One Richardson step on the central difference.
  MatrixXd d_h = central(h);
  MatrixXd d_h2 = central(h / 2.0);
  return (4.0 * d_h2 - d_h) / 3.0;
}

double skew_defect(const AgentModel& model, const VectorXd& q_i,
                   const VectorXd& v_i, const VectorXd& w) {
  MatrixXd n_mat = mass_matrix_dot(model, q_i, v_i) -
                   2.0 * model.coriolis_matrix(q_i, v_i);
  return w.dot(n_mat * w);
}

double total_coenergy(const std::vector<AgentModel>& models,
                      const NetworkState& state) {
  const int n = models.front().dof;
  double h = 0.0;
  for (size_t i = 0; i < models.size(); ++i) {
    VectorXd q_i = state.q.segment(i * n, n);
    VectorXd v_i = state.v.segment(i * n, n);
    h += 0.5 * v_i.dot(models[i].mass_matrix(q_i) * v_i) +
         models[i].potential(q_i);
  }
  return h;
}

std::pair<VectorXd, VectorXd> virtual_rhs(const AgentModel& model,
                                          const VectorXd& q_i,
                                          const VectorXd& v_i,
                                          const VirtualState& vstate,
                                          const VectorXd& u_bar_i,
                                          int agent_index) {
  VectorXd rhs = u_bar_i - model.coriolis_matrix(q_i, v_i) * vstate.s -
                 model.gravity_vector(vstate.r);
  return {vstate.s, solve_mass(model, q_i, rhs, agent_index)};
}

}  // namespace elnet::dynamics
