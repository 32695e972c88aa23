// Compares the serial reference kernels against the OpenMP paths on a large
// heterogeneous network of two-link agents.

#include <omp.h>

#include <cstdio>
#include <random>

#include "elnet/analysis.hpp"
#include "elnet/models.hpp"
#include "elnet/scenario.hpp"

using namespace elnet;
using Eigen::VectorXd;

namespace {

scenario::Scenario make_big_scenario(int num_agents) {
  scenario::Scenario s;
  s.name = "bench";
  s.net.num_vertices = num_agents;
  s.net.agent_dim = 2;
  for (int i = 1; i < num_agents; ++i) s.net.edges.emplace_back(i, i + 1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.8, 1.2);
  for (int i = 0; i < num_agents; ++i) {
    s.models.push_back(models::make_two_link(um(rng), um(rng), 1.0, 0.8, 9.81));
  }
  s.protocol = controllers::Protocol::NodeEdgeSpring;
  const int nn = num_agents * 2;
  s.gains.Pi = 3.5 * Eigen::MatrixXd::Identity(nn, nn);
  s.gains.K = 12.0 * Eigen::MatrixXd::Identity(nn, nn);
  s.gains.K_zeta = 5.0 * Eigen::MatrixXd::Identity(2, 2);
  s.gains.Delta = Eigen::MatrixXd::Identity(num_agents - 1, num_agents - 1);
  s.ref = controllers::constant_reference(VectorXd::Zero(2));
  s.zeta_d = VectorXd::Zero((num_agents - 1) * 2);
  std::uniform_real_distribution<double> uq(-0.5, 0.5);
  s.q0.resize(nn);
  s.v0 = VectorXd::Zero(nn);
  for (int i = 0; i < nn; ++i) s.q0(i) = uq(rng);
  s.integ.step = 1e-3;
  s.integ.horizon = 1.0;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const int num_agents = argc > 1 ? std::atoi(argv[1]) : 64;
  scenario::Scenario s = make_big_scenario(num_agents);
  std::printf("network: %d two-link agents, horizon %.1f s, step %.0e, %d threads\n",
              num_agents, s.integ.horizon, s.integ.step, omp_get_max_threads());

  double elapsed[2];
  integrate::SimTrace traces[2];
  for (int pass = 0; pass < 2; ++pass) {
    Exec policy = pass == 0 ? Exec::Serial : Exec::Parallel;
    double t0 = omp_get_wtime();
    traces[pass] = integrate::simulate(scenario::make_rhs(s, policy),
                                       scenario::initial_state(s), s.integ);
    elapsed[pass] = omp_get_wtime() - t0;
    std::printf("simulate  %-8s %8.3f s\n", pass == 0 ? "serial" : "parallel",
                elapsed[pass]);
  }
  double max_diff = 0.0;
  for (size_t k = 0; k < traces[0].states.size(); ++k) {
    max_diff = std::max(
        max_diff,
        (traces[0].states[k] - traces[1].states[k]).cwiseAbs().maxCoeff());
  }
  std::printf("speedup %.2fx, max state diff %.1e (must be 0)\n",
              elapsed[0] / elapsed[1], max_diff);

  for (int pass = 0; pass < 2; ++pass) {
    analysis::CertifyOptions opts;
    opts.policy = pass == 0 ? Exec::Serial : Exec::Parallel;
    double t0 = omp_get_wtime();
    auto rep = analysis::certify_trace(traces[0], s.protocol, s.gains, s.net,
                                       s.models, s.ref, s.zeta_d, opts);
    std::printf("certify   %-8s %8.3f s (passed=%d)\n",
                pass == 0 ? "serial" : "parallel", omp_get_wtime() - t0,
                rep.passed ? 1 : 0);
  }
  return max_diff == 0.0 ? 0 : 1;
}
