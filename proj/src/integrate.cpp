#include "elnet/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elnet::integrate {

namespace {

bool finite(const VectorXd& x) { return x.allFinite(); }

VectorXd rk4_step(const Rhs& rhs, double t, const VectorXd& x, double h) {
  VectorXd k1 = rhs(t, x);
  VectorXd k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
  VectorXd k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
  VectorXd k4 = rhs(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SimTrace simulate_rk4(const Rhs& rhs, const VectorXd& x0,
                      const IntegratorConfig& cfg) {
  SimTrace trace;
  if (cfg.step > cfg.horizon) {
    throw std::invalid_argument("simulate: step larger than horizon");
  }
  const long num_steps = std::max(1L, std::lround(cfg.horizon / cfg.step));
  VectorXd x = x0;
  trace.times.push_back(0.0);
  trace.states.push_back(x);
  for (long k = 0; k < num_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.step;
    x = rk4_step(rhs, t, x, cfg.step);
    if (!finite(x)) {
      trace.blew_up = true;
      return trace;
    }
    if ((k + 1) % cfg.record_stride == 0 || k + 1 == num_steps) {
      trace.times.push_back(static_cast<double>(k + 1) * cfg.step);
      trace.states.push_back(x);
    }
  }
  return trace;
}

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0,
                 kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

SimTrace simulate_rk45(const Rhs& rhs, const VectorXd& x0,
                       const IntegratorConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
    throw std::invalid_argument("simulate: tolerances must be positive");
  }
  SimTrace trace;
  double t = 0.0;
  VectorXd x = x0;
  VectorXd k1 = rhs(t, x);  // FSAL
  double h = std::min(cfg.horizon / 100.0, 1e-2);
  trace.times.push_back(0.0);
  trace.states.push_back(x);
  const double h_min = 1e-14 * cfg.horizon;
  while (t < cfg.horizon) {
    h = std::min(h, cfg.horizon - t);
    VectorXd k2 = rhs(t + kA21 * h, x + h * (kA21 * k1));
    VectorXd k3 = rhs(t + 0.3 * h, x + h * (kA31 * k1 + kA32 * k2));
    VectorXd k4 = rhs(t + 0.8 * h, x + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    VectorXd k5 = rhs(t + 8.0 / 9.0 * h,
                      x + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    VectorXd k6 = rhs(t + h, x + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 +
                                      kA64 * k4 + kA65 * k5));
    VectorXd x5 =
        x + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    VectorXd k7 = rhs(t + h, x5);
    VectorXd err_vec = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 +
                            kE6 * k6 + kE7 * k7);
    if (!finite(x5)) {
      trace.blew_up = true;
      return trace;
    }
    double err = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x(i)), std::abs(x5(i)));
      err = std::max(err, std::abs(err_vec(i)) / scale);
    }
    if (err <= 1.0) {
      t += h;
      x = x5;
      k1 = k7;
      trace.times.push_back(t);
      trace.states.push_back(x);
    }
    double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < h_min) {
      throw std::runtime_error("simulate: rk45 step underflow at t=" +
                               std::to_string(t));
    }
  }
  return trace;
}

}  // namespace

SimTrace simulate(const Rhs& rhs, const VectorXd& x0,
                  const IntegratorConfig& cfg) {
  if (!(cfg.horizon > 0.0)) {
    throw std::invalid_argument("simulate: horizon must be positive");
  }
  if (!finite(x0)) throw std::invalid_argument("simulate: x0 not finite");
  if (cfg.method == Method::Rk4Fixed) {
    if (!(cfg.step > 0.0)) {
      throw std::invalid_argument("simulate: step must be positive");
    }
    if (cfg.record_stride < 1) {
      throw std::invalid_argument("simulate: record_stride must be >= 1");
    }
    return simulate_rk4(rhs, x0, cfg);
  }
  return simulate_rk45(rhs, x0, cfg);
}

double convergence_order(const Rhs& rhs, const VectorXd& x0, double horizon,
                         double base_step) {
  IntegratorConfig ref_cfg;
  ref_cfg.method = Method::Rk45Reference;
  ref_cfg.abs_tol = 1e-13;
  ref_cfg.rel_tol = 1e-13;
  ref_cfg.horizon = horizon;
  VectorXd x_ref = simulate(rhs, x0, ref_cfg).states.back();

  double errs[3];
  for (int i = 0; i < 3; ++i) {
    IntegratorConfig cfg;
    cfg.method = Method::Rk4Fixed;
    cfg.step = base_step / std::pow(2.0, i);
    cfg.horizon = horizon;
    cfg.record_stride = 1 << 20;  // terminal state only
    errs[i] = (simulate(rhs, x0, cfg).states.back() - x_ref).norm();
  }
  const double floor_err = 1e-13 * (1.0 + x_ref.norm());
  if (errs[2] < floor_err) return 4.0;  // error at rounding level
  double p1 = std::log2(errs[0] / errs[1]);
  double p2 = std::log2(errs[1] / errs[2]);
  if (std::abs(p1 - p2) > 1.0) {
    throw std::runtime_error("convergence_order: unstable order estimate");
  }
  return 0.5 * (p1 + p2);
}

}  // namespace elnet::integrate
