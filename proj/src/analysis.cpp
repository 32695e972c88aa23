#include "elnet/analysis.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace elnet::analysis {

using controllers::NodeEdgeDerivatives;
using controllers::SlidingVariables;
using dynamics::NetworkState;

namespace {

MatrixXd block_mass(const std::vector<AgentModel>& models, const VectorXd& q) {
  const int n = models.front().dof;
  const int num_agents = static_cast<int>(models.size());
  MatrixXd m = MatrixXd::Zero(num_agents * n, num_agents * n);
  for (int i = 0; i < num_agents; ++i) {
    m.block(i * n, i * n, n, n) = models[i].mass_matrix(q.segment(i * n, n));
  }
  return m;
}

MatrixXd block_coriolis(const std::vector<AgentModel>& models,
                        const VectorXd& q, const VectorXd& v) {
  const int n = models.front().dof;
  const int num_agents = static_cast<int>(models.size());
  MatrixXd c = MatrixXd::Zero(num_agents * n, num_agents * n);
  for (int i = 0; i < num_agents; ++i) {
    c.block(i * n, i * n, n, n) = models[i].coriolis_matrix(
        q.segment(i * n, n), v.segment(i * n, n));
  }
  return c;
}

double lambda_min(const MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m).eigenvalues().minCoeff();
}

double lambda_max(const MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m).eigenvalues().maxCoeff();
}

double mass_low(const std::vector<AgentModel>& models) {
  double lo = std::numeric_limits<double>::max();
  for (const auto& m : models) lo = std::min(lo, m.mass_eig_low);
  return lo;
}

double mass_high(const std::vector<AgentModel>& models) {
  double hi = 0.0;
  for (const auto& m : models) hi = std::max(hi, m.mass_eig_high);
  return hi;
}

double edge_potential(const EdgeSpringState& espring, const GainConfig& gains) {
  const int n = static_cast<int>(gains.K_zeta.rows());
  const int num_edges = static_cast<int>(espring.zeta.size()) / n;
  double p = 0.0;
  for (int k = 0; k < num_edges; ++k) {
    VectorXd d = espring.zeta.segment(k * n, n) -
                 espring.zeta_d.segment(k * n, n);
    p += 0.5 * d.dot(gains.K_zeta * d);
  }
  return p;
}

}  // namespace

double storage_node_edge(const VectorXd& q_tilde, const VectorXd& s,
                         const EdgeSpringState& espring, const VectorXd& q,
                         const GainConfig& gains,
                         const std::vector<AgentModel>& models) {
  return 0.5 * q_tilde.dot(gains.Pi * q_tilde) +
         0.5 * s.dot(block_mass(models, q) * s) + edge_potential(espring, gains);
}

double storage_sync(const VectorXd& q_tilde, const VectorXd& s,
                    const VectorXd& q, const GainConfig& gains,
                    const NetworkGraph& g,
                    const std::vector<AgentModel>& models) {
  MatrixXd coupling = controllers::coupling_matrix(g, gains);
  return 0.5 * q_tilde.dot(coupling * q_tilde) +
         0.5 * s.dot(block_mass(models, q) * s);
}

RateBounds rate_bounds_node_edge(const GainConfig& gains,
                                 const std::vector<AgentModel>& models) {
  if (!(mass_low(models) > 0.0)) {
    throw std::invalid_argument("rate bounds: models lack mass eigenvalue bounds");
  }
  RateBounds rb;
  const double pi_lo = lambda_min(gains.Pi), pi_hi = lambda_max(gains.Pi);
  const double kz_lo = lambda_min(gains.K_zeta), kz_hi = lambda_max(gains.K_zeta);
  rb.k1 = std::min({pi_lo, mass_low(models), kz_lo});
  rb.k2 = std::max({pi_hi, mass_high(models), kz_hi});
  rb.k3 = std::min({pi_lo * pi_lo, lambda_min(gains.K), kz_lo * kz_lo});
  rb.beta = rb.k3 / rb.k2;
  return rb;
}

RateBounds rate_bounds_sync(const GainConfig& gains, const NetworkGraph& g,
                            const std::vector<AgentModel>& models) {
  if (!(mass_low(models) > 0.0)) {
    throw std::invalid_argument("rate bounds: models lack mass eigenvalue bounds");
  }
  MatrixXd coupling = controllers::coupling_matrix(g, gains);
  const double a_lo = lambda_min(coupling), a_hi = lambda_max(coupling);
  RateBounds rb;
  rb.k1 = std::min(a_lo, mass_low(models));
  rb.k2 = std::max(a_hi, mass_high(models));
  rb.k3 = std::min(a_lo * a_lo, lambda_min(gains.K));
  rb.beta = rb.k3 / rb.k2;
  return rb;
}

std::pair<MatrixXd, bool> solve_lyapunov_symmetric(const MatrixXd& A,
                                                   const MatrixXd& Q) {
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 ||
      !(lambda_min(Q) > 0.0)) {
    throw std::invalid_argument("lyapunov: Q must be SPD");
  }
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("lyapunov: A must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(A);
  const auto& lam = eig.eigenvalues();
  const MatrixXd& v = eig.eigenvectors();
  MatrixXd q_rot = v.transpose() * Q * v;
  MatrixXd p_rot(A.rows(), A.cols());
  const double scale = lam.cwiseAbs().maxCoeff() + 1.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      double denom = lam(i) + lam(j);
      if (std::abs(denom) < 1e-14 * scale) {
        throw std::runtime_error("lyapunov: solve is singular");
      }
      p_rot(i, j) = q_rot(i, j) / denom;
    }
  }
  MatrixXd p = v * p_rot * v.transpose();
  p = 0.5 * (p + p.transpose());
  return {p, lambda_min(p) > 0.0};
}

std::pair<MatrixXd, bool> check_sliding_stability(const MatrixXd& Pi,
                                                  const MatrixXd& Delta,
                                                  const NetworkGraph& g,
                                                  const MatrixXd& Q) {
  MatrixXd a = Pi;
  if (g.num_edges() > 0) {
    MatrixXd b = graph::build_incidence(g);
    a += graph::kron_lift(b * Delta * b.transpose(), g.agent_dim);
  }
  return solve_lyapunov_symmetric(a, Q);
}

namespace {

struct SampleEval {
  double storage = 0.0;
  double residual = 0.0;
};

// Storage and closed-loop residual at one recorded sample.
SampleEval eval_sample(double t, const VectorXd& x, Protocol protocol,
                       const GainConfig& gains, const NetworkGraph& g,
                       const std::vector<AgentModel>& models,
                       const ReferenceTrajectory& ref, const VectorXd& zeta_d) {
  const int n = g.agent_dim;
  const int nn = g.num_vertices * n;
  NetworkState state{x.head(nn), x.segment(nn, nn), t};

  VectorXd ones_qd(nn), ones_qdotd(nn), ones_qddotd(nn);
  VectorXd q_d = ref.q_d(t), qdot_d = ref.qdot_d(t), qddot_d = ref.qddot_d(t);
  for (int i = 0; i < g.num_vertices; ++i) {
    ones_qd.segment(i * n, n) = q_d;
    ones_qdotd.segment(i * n, n) = qdot_d;
    ones_qddotd.segment(i * n, n) = qddot_d;
  }
  VectorXd q_tilde = state.q - ones_qd;
  VectorXd q_tilde_dot = state.v - ones_qdotd;
  MatrixXd mass = block_mass(models, state.q);
  MatrixXd cor = block_coriolis(models, state.q, state.v);

  SampleEval out;
  if (protocol == Protocol::NodeEdgeSpring) {
    EdgeSpringState espring{x.tail(x.size() - 2 * nn), zeta_d};
    // Per-node sliding variable of the repaired Theorem-1 reference.
    VectorXd s = q_tilde_dot + gains.Pi * q_tilde;
    auto derivs = controllers::node_edge_closed_loop_rhs(models, g, state,
                                                         espring, gains, ref);
    VectorXd vdot_r = ones_qddotd - gains.Pi * q_tilde_dot;
    VectorXd sdot = derivs.vdot - vdot_r;
    VectorXd tau_edge =
        controllers::spring_edge_rhs(espring, VectorXd::Zero(espring.zeta.size()),
                                     gains.K_zeta)
            .second;
    MatrixXd b_lift = graph::kron_lift(graph::build_incidence(g), n);
    VectorXd r1 = mass * sdot + cor * s + gains.K * s + gains.Pi * q_tilde +
                  b_lift * tau_edge;
    VectorXd r2 = derivs.zeta_dot + tau_edge - b_lift.transpose() * s;
    out.residual = std::max(r1.lpNorm<Eigen::Infinity>(),
                            r2.lpNorm<Eigen::Infinity>());
    out.storage = storage_node_edge(q_tilde, s, espring, state.q, gains, models);
    return out;
  }

  SlidingVariables sv = controllers::sync_sliding(g, gains, state, ref);
  VectorXd u = -gains.ext_input_gain * sv.s;
  MatrixXd coupling = controllers::coupling_matrix(g, gains);
  const bool backstep = protocol == Protocol::SyncBackstepping ||
                        protocol == Protocol::SingleBackstepping;
  VectorXd tau =
      backstep
          ? controllers::sync_backstepping_control(models, g, gains, state, ref, u)
          : controllers::sync_slotine_li_control(models, g, gains, state, ref, u);
  VectorXd vdot = dynamics::network_rhs(models, state, tau).second;
  VectorXd vdot_r = ones_qddotd - coupling * q_tilde_dot;
  VectorXd sdot = vdot - vdot_r;
  VectorXd r1 = mass * sdot + cor * sv.s + gains.K * sv.s - u;
  if (backstep) r1 += coupling * q_tilde;
  VectorXd r2 = q_tilde_dot + coupling * q_tilde - sv.s;
  out.residual =
      std::max(r1.lpNorm<Eigen::Infinity>(), r2.lpNorm<Eigen::Infinity>());
  out.storage =
      backstep ? storage_sync(q_tilde, sv.s, state.q, gains, g, models)
               : 0.5 * sv.s.dot(mass * sv.s);
  return out;
}

}  // namespace

CertificationReport certify_trace(const SimTrace& trace, Protocol protocol,
                                  const GainConfig& gains,
                                  const NetworkGraph& g,
                                  const std::vector<AgentModel>& models,
                                  const ReferenceTrajectory& ref,
                                  const VectorXd& zeta_d,
                                  const CertifyOptions& opts) {
  const int count = static_cast<int>(trace.times.size());
  if (count < 3) {
    throw std::invalid_argument("certify: trace needs at least 3 samples");
  }
  CertificationReport rep;
  rep.envelope_tol = opts.envelope_tol;
  switch (protocol) {
    case Protocol::NodeEdgeSpring:
      rep.beta = rate_bounds_node_edge(gains, models).beta;
      break;
    case Protocol::SyncBackstepping:
    case Protocol::SingleBackstepping:
      rep.beta = rate_bounds_sync(gains, g, models).beta;
      break;
    default:
      // Plain Slotine-Li ships only the strict passivity of S_s: monotone
      // decrease is certified, no exponential envelope.
      rep.envelope_checked = false;
      break;
  }

  double max_dt = 0.0;
  for (int k = 1; k < count; ++k) {
    max_dt = std::max(max_dt, trace.times[k] - trace.times[k - 1]);
  }
  if (rep.envelope_checked && max_dt * rep.beta > 1e-2) {
    throw std::invalid_argument(
        "certify: trace too coarse, recorded step must be <= " +
        std::to_string(1e-2 / rep.beta) + " s");
  }

  rep.storage.resize(count);
  std::vector<double> residuals(count);
  const bool par = opts.policy == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (int k = 0; k < count; ++k) {
    SampleEval ev = eval_sample(trace.times[k], trace.states[k], protocol,
                                gains, g, models, ref, zeta_d);
    rep.storage[k] = ev.storage;
    residuals[k] = ev.residual;
  }
  for (double r : residuals) rep.max_residual = std::max(rep.max_residual, r);
  rep.residual_ok = rep.max_residual < opts.residual_tol;

  const double s0 = rep.storage.front();
  const double decrease_slack = 1e-10 * (1.0 + s0);
  const double envelope_slack = 1e-12 * (1.0 + s0);
  rep.decrease_margin.resize(count, 0.0);
  for (int k = 0; k < count; ++k) {
    // Central differences interior, one-sided at the ends.
    int lo = std::max(0, k - 1), hi = std::min(count - 1, k + 1);
    rep.decrease_margin[k] = (rep.storage[hi] - rep.storage[lo]) /
                             (trace.times[hi] - trace.times[lo]);
  }
  for (int k = 1; k < count; ++k) {
    if (rep.storage[k] - rep.storage[k - 1] > decrease_slack) {
      ++rep.decrease_violations;
      if (rep.first_violation_time < 0.0) {
        rep.first_violation_time = trace.times[k];
      }
    }
    if (rep.envelope_checked) {
      double bound = s0 * std::exp(-rep.beta * (1.0 - opts.envelope_tol) *
                                   trace.times[k]) +
                     envelope_slack;
      if (rep.storage[k] > bound) {
        ++rep.envelope_violations;
        if (rep.first_violation_time < 0.0) {
          rep.first_violation_time = trace.times[k];
        }
      }
    }
  }
  rep.decrease_ok = rep.decrease_violations == 0;
  rep.envelope_ok = rep.envelope_violations == 0;
  rep.passed = rep.decrease_ok && rep.envelope_ok && rep.residual_ok;
  return rep;
}

std::string CertificationReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed;
  j["envelope_checked"] = envelope_checked;
  j["envelope_ok"] = envelope_ok;
  j["envelope_violations"] = envelope_violations;
  j["envelope_tol"] = envelope_tol;
  j["decrease_ok"] = decrease_ok;
  j["decrease_violations"] = decrease_violations;
  j["residual_ok"] = residual_ok;
  j["max_residual"] = max_residual;
  j["beta"] = beta;
  j["first_violation_time"] = first_violation_time;
  j["storage_initial"] = storage.empty() ? 0.0 : storage.front();
  j["storage_final"] = storage.empty() ? 0.0 : storage.back();
  j["samples"] = storage.size();
  return j.dump(2);
}

}  // namespace elnet::analysis
