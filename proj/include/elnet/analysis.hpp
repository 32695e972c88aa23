#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "elnet/controllers.hpp"
#include "elnet/integrate.hpp"

namespace elnet::analysis {

using controllers::EdgeSpringState;
using controllers::GainConfig;
using controllers::Protocol;
using controllers::ReferenceTrajectory;
using dynamics::AgentModel;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using graph::NetworkGraph;
using integrate::SimTrace;

/// Quadratic sandwich bounds k1 ||x||^2 <= S <= k2 ||x||^2 and derivative
/// bound Sdot <= -k3 ||x||^2, giving the exponential rate beta = k3/k2.
struct RateBounds {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double beta = 0.0;
};

struct CertificationReport {
  std::vector<double> storage;          // S at each recorded sample
  std::vector<double> decrease_margin;  // central-difference Sdot
  int envelope_violations = 0;
  int decrease_violations = 0;
  double max_residual = 0.0;            // closed-loop equation residual
  double beta = 0.0;                    // rate used for the envelope
  double envelope_tol = 0.05;
  bool envelope_checked = true;  // false for the plain Slotine-Li storage
  bool envelope_ok = false;
  bool decrease_ok = false;
  bool residual_ok = false;
  double first_violation_time = -1.0;
  bool passed = false;

  std::string to_json() const;
};

/// S = 1/2 q_tilde^T Pi q_tilde + 1/2 s^T M(q) s + P_zeta(zeta).
double storage_node_edge(const VectorXd& q_tilde, const VectorXd& s,
                         const EdgeSpringState& espring, const VectorXd& q,
                         const GainConfig& gains,
                         const std::vector<AgentModel>& models);

/// S = 1/2 q_tilde^T ([Pi + B Delta B^T] (x) I_n) q_tilde + 1/2 s^T M(q) s.
double storage_sync(const VectorXd& q_tilde, const VectorXd& s,
                    const VectorXd& q, const GainConfig& gains,
                    const NetworkGraph& g,
                    const std::vector<AgentModel>& models);

/// k2 = max{lmax(Pi), m_high, lmax(K_zeta)},
/// k3 = min{lmin(Pi)^2, lmin(K), lmin(K_zeta)^2},
/// k1 = min{lmin(Pi), m_low, lmin(K_zeta)}. m_low/m_high are the
/// model-declared mass eigenvalue bounds over the working range.
RateBounds rate_bounds_node_edge(const GainConfig& gains,
                                 const std::vector<AgentModel>& models);

/// Same with the [Pi + B Delta B^T] spectrum in place of Pi and no edge term.
RateBounds rate_bounds_sync(const GainConfig& gains, const NetworkGraph& g,
                            const std::vector<AgentModel>& models);

/// Certifies the sliding dynamics q~' = -A q~ with A = [Pi + B Delta B^T]
/// (x) I_n: solves P*A + A^T*P = Q (i.e. P*(-A) + (-A)^T*P = -Q) via the
/// symmetric eigendecomposition of A. Returns (P, P is SPD). Throws
/// std::invalid_argument when Q is not SPD, std::runtime_error on a
/// non-finite solve (some eigenvalue pair sums to ~0).
std::pair<MatrixXd, bool> check_sliding_stability(const MatrixXd& Pi,
                                                  const MatrixXd& Delta,
                                                  const NetworkGraph& g,
                                                  const MatrixXd& Q);

/// General continuous Lyapunov solve for symmetric A (test/oracle entry).
std::pair<MatrixXd, bool> solve_lyapunov_symmetric(const MatrixXd& A,
                                                   const MatrixXd& Q);

struct CertifyOptions {
  double envelope_tol = 0.05;     // envelope exponent slack
  double residual_tol = 1e-9;
  Exec policy = Exec::Serial;
};

/// Evaluates the protocol's storage function along the trace, checks strict
/// decrease, the exponential envelope S(t) <= S(0) e^{-beta (1 - tol) t}
/// (protocols with a strict Lyapunov function), and the closed-loop residual
/// at every recorded sample. Throws std::invalid_argument when the recorded
/// step is too coarse (step * beta > 1e-2), naming the required step size.
CertificationReport certify_trace(const SimTrace& trace, Protocol protocol,
                                  const GainConfig& gains,
                                  const NetworkGraph& g,
                                  const std::vector<AgentModel>& models,
                                  const ReferenceTrajectory& ref,
                                  const VectorXd& zeta_d,
                                  const CertifyOptions& opts = {});

}  // namespace elnet::analysis
