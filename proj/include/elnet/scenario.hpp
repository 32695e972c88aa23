#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elnet/analysis.hpp"

namespace elnet::scenario {

using analysis::CertificationReport;
using controllers::GainConfig;
using controllers::Protocol;
using controllers::ReferenceTrajectory;
using dynamics::AgentModel;
using Eigen::VectorXd;
using graph::NetworkGraph;
using integrate::IntegratorConfig;
using integrate::SimTrace;

struct Scenario {
  std::string name;
  NetworkGraph net;
  std::vector<AgentModel> models;
  Protocol protocol = Protocol::NodeEdgeSpring;
  GainConfig gains;
  ReferenceTrajectory ref;
  VectorXd zeta_d;                 // stacked M*n (node_edge_spring only)
  std::optional<VectorXd> zeta0;   // default (B^T (x) I_n) q(0)
  VectorXd q0;
  VectorXd v0;
  bool random_initial = false;
  uint64_t seed = 0;
  double q0_range = 1.0;           // q(0) ~ U(-range, range) when random
  double v0_range = 0.5;
  IntegratorConfig integ;
  std::string scenario_json;       // raw text, echoed into trace metadata
};

/// Loads and validates a scenario JSON file. Strict schema: unknown keys
/// are rejected; errors carry a JSON-pointer-style path.
Scenario load_scenario(const std::string& path);

/// Parses scenario JSON from a string (same validation as load_scenario).
Scenario parse_scenario(const std::string& text, const std::string& name);

/// Stacked closed-loop state for a scenario: x = [q; v] or [q; v; zeta].
VectorXd initial_state(const Scenario& s);

/// Closed-loop right-hand side for the scenario's protocol.
integrate::Rhs make_rhs(const Scenario& s, Exec policy = Exec::Serial);

/// Recomputes the applied torque at a recorded sample (pure control laws).
VectorXd torque_at(const Scenario& s, double t, const VectorXd& x);

/// Simulates, fills the torque/storage columns, certifies. On blow-up the
/// partial trace is still returned (and persisted by the CLI).
std::pair<SimTrace, CertificationReport> run_scenario(const Scenario& s,
                                                      Exec policy = Exec::Serial);

/// CSV: header t,q_1..q_Nn,v_1..v_Nn[,zeta_1..zeta_Mn],tau_1..tau_Nn,S;
/// 17 significant digits, LF line endings, deterministic bytes.
void emit_csv(const SimTrace& trace, const Scenario& s,
              const std::string& path);
std::string trace_to_csv(const SimTrace& trace, const Scenario& s);

/// Parses a CSV produced by emit_csv back into a trace (round-trip exact).
SimTrace parse_csv(const std::string& text, const Scenario& s);
SimTrace load_csv(const std::string& path, const Scenario& s);

/// SVG of q_i vs t, one polyline per agent coordinate, legend by index.
/// Throws std::invalid_argument on an empty trace.
void emit_plot(const SimTrace& trace, const Scenario& s,
               const std::string& path);
std::string trace_to_svg(const SimTrace& trace, const Scenario& s);

}  // namespace elnet::scenario
