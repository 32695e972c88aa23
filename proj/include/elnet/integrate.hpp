#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace elnet::integrate {

using Eigen::VectorXd;

using Rhs = std::function<VectorXd(double, const VectorXd&)>;

enum class Method { Rk4Fixed, Rk45Reference };

struct IntegratorConfig {
  Method method = Method::Rk4Fixed;
  double step = 1e-3;          // fixed-step size (rk4_fixed)
  double abs_tol = 1e-10;      // rk45_reference
  double rel_tol = 1e-10;      // rk45_reference
  double horizon = 1.0;        // seconds
  int record_stride = 1;       // record every k-th accepted step (rk4 only)
};

/// Time-stamped record of a simulation. The torque and storage columns are
/// filled in by the scenario/analysis layers; simulate itself only records
/// the raw state.
struct SimTrace {
  std::vector<double> times;
  std::vector<VectorXd> states;
  std::vector<VectorXd> taus;      // optional, same length as times
  std::vector<double> storage;     // optional, same length as times
  bool blew_up = false;            // aborted on non-finite state
  std::string metadata;            // scenario hash / config echo
};

/// Integrates x' = rhs(t, x) from t = 0 over cfg.horizon. rk4_fixed is
/// deterministic (bit-identical traces for identical inputs); rk45_reference
/// is the adaptive Dormand-Prince oracle, recording accepted steps.
/// On a non-finite state the trace is truncated at the last valid time and
/// blew_up is set. Throws std::invalid_argument if the step exceeds the
/// horizon or a tolerance is nonpositive.
SimTrace simulate(const Rhs& rhs, const VectorXd& x0,
                  const IntegratorConfig& cfg);

/// Richardson order estimate on steps (h, h/2, h/4) against a tight
/// rk45_reference solution. Returns 4.0 +/- ~0.3 for smooth dynamics;
/// returns exactly 4.0 when the fine-step error is at rounding level
/// (e.g. x' = 0). Throws std::runtime_error when the estimate is unstable
/// (non-smooth dynamics).
double convergence_order(const Rhs& rhs, const VectorXd& x0, double horizon,
                         double base_step = 1e-2);

}  // namespace elnet::integrate
