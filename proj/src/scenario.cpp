#include "elnet/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "elnet/models.hpp"

namespace elnet::scenario {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("scenario: " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "/" + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path, std::string("missing field '") + key + "'");
  return obj.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

VectorXd as_vector(const json& j, const std::string& path,
                   Eigen::Index expected) {
  if (!j.is_array()) fail(path, "expected an array");
  VectorXd out(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    out(i) = as_number(j[i], path + "/" + std::to_string(i));
  }
  if (expected >= 0 && out.size() != expected) {
    fail(path, "expected length " + std::to_string(expected) + ", got " +
                   std::to_string(out.size()));
  }
  return out;
}

/// Scalar or length-count array, expanded to a count-vector.
VectorXd scalar_or_vector(const json& j, const std::string& path, int count) {
  if (j.is_number()) return VectorXd::Constant(count, j.get<double>());
  return as_vector(j, path, count);
}

NetworkGraph parse_graph(const json& j, const std::string& path) {
  check_keys(j, path, {"num_vertices", "agent_dim", "edges"});
  NetworkGraph g;
  g.num_vertices = as_int(require(j, path, "num_vertices"), path + "/num_vertices");
  g.agent_dim = as_int(require(j, path, "agent_dim"), path + "/agent_dim");
  const json& edges = require(j, path, "edges");
  if (!edges.is_array()) fail(path + "/edges", "expected an array");
  for (size_t k = 0; k < edges.size(); ++k) {
    std::string epath = path + "/edges/" + std::to_string(k);
    if (!edges[k].is_array() || edges[k].size() != 2) {
      fail(epath, "expected a [tail, head] pair");
    }
    g.edges.emplace_back(as_int(edges[k][0], epath + "/0"),
                         as_int(edges[k][1], epath + "/1"));
  }
  try {
    graph::validate(g);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return g;
}

AgentModel parse_model(const json& j, const std::string& path, int agent_dim) {
  check_keys(j, path, {"model", "params"});
  std::string name = as_string(require(j, path, "model"), path + "/model");
  std::map<std::string, double> params;
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) fail(path + "/params", "expected an object");
    for (const auto& [key, value] : p.items()) {
      params[key] = as_number(value, path + "/params/" + key);
    }
  }
  AgentModel model;
  try {
    model = models::make_from_catalog(name, params);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  if (model.dof != agent_dim) {
    fail(path, "model dof " + std::to_string(model.dof) +
                   " does not match agent_dim " + std::to_string(agent_dim));
  }
  return model;
}

Protocol parse_protocol_name(const std::string& name, const std::string& path) {
  if (name == "node_edge_spring") return Protocol::NodeEdgeSpring;
  if (name == "sync_slotine_li") return Protocol::SyncSlotineLi;
  if (name == "sync_backstepping") return Protocol::SyncBackstepping;
  if (name == "single_slotine_li") return Protocol::SingleSlotineLi;
  if (name == "single_backstepping") return Protocol::SingleBackstepping;
  fail(path, "unknown protocol '" + name + "'");
}

GainConfig parse_gains(const json& j, const std::string& path,
                       const NetworkGraph& g) {
  check_keys(j, path, {"pi", "k", "delta", "k_zeta", "ext_input_gain"});
  const int n = g.agent_dim;
  const int num_agents = g.num_vertices;
  GainConfig gains;
  VectorXd pi = scalar_or_vector(require(j, path, "pi"), path + "/pi", num_agents);
  VectorXd k = scalar_or_vector(require(j, path, "k"), path + "/k", num_agents);
  gains.Pi = Eigen::MatrixXd::Zero(num_agents * n, num_agents * n);
  gains.K = Eigen::MatrixXd::Zero(num_agents * n, num_agents * n);
  for (int i = 0; i < num_agents; ++i) {
    gains.Pi.block(i * n, i * n, n, n) =
        pi(i) * Eigen::MatrixXd::Identity(n, n);
    gains.K.block(i * n, i * n, n, n) = k(i) * Eigen::MatrixXd::Identity(n, n);
  }
  double kz = j.contains("k_zeta")
                  ? as_number(j.at("k_zeta"), path + "/k_zeta")
                  : 1.0;
  gains.K_zeta = kz * Eigen::MatrixXd::Identity(n, n);
  if (g.num_edges() > 0) {
    VectorXd delta =
        j.contains("delta")
            ? scalar_or_vector(j.at("delta"), path + "/delta", g.num_edges())
            : VectorXd::Ones(g.num_edges());
    gains.Delta = delta.asDiagonal();
  }
  if (j.contains("ext_input_gain")) {
    gains.ext_input_gain =
        as_number(j.at("ext_input_gain"), path + "/ext_input_gain");
  }
  return gains;
}

ReferenceTrajectory parse_reference(const json& j, const std::string& path,
                                    int n) {
  std::string type = as_string(require(j, path, "type"), path + "/type");
  if (type == "constant") {
    check_keys(j, path, {"type", "value"});
    const json& value = require(j, path, "value");
    VectorXd q_d = value.is_number() ? VectorXd::Constant(n, value.get<double>())
                                     : as_vector(value, path + "/value", n);
    return controllers::constant_reference(q_d);
  }
  if (type == "sinusoid") {
    check_keys(j, path, {"type", "offset", "amplitude", "omega", "phase"});
    VectorXd offset = scalar_or_vector(require(j, path, "offset"), path + "/offset", n);
    VectorXd amp = scalar_or_vector(require(j, path, "amplitude"), path + "/amplitude", n);
    VectorXd omega = scalar_or_vector(require(j, path, "omega"), path + "/omega", n);
    VectorXd phase = j.contains("phase")
                         ? scalar_or_vector(j.at("phase"), path + "/phase", n)
                         : VectorXd::Zero(n);
    return controllers::sinusoid_reference(offset, amp, omega, phase);
  }
  if (type == "polynomial") {
    check_keys(j, path, {"type", "coeffs"});
    const json& rows = require(j, path, "coeffs");
    if (!rows.is_array() || rows.size() != static_cast<size_t>(n)) {
      fail(path + "/coeffs", "expected " + std::to_string(n) + " coefficient rows");
    }
    size_t deg = rows[0].size();
    Eigen::MatrixXd coeffs(n, deg);
    for (int i = 0; i < n; ++i) {
      coeffs.row(i) =
          as_vector(rows[i], path + "/coeffs/" + std::to_string(i), deg)
              .transpose();
    }
    return controllers::polynomial_reference(coeffs);
  }
  fail(path + "/type", "unknown reference type '" + type + "'");
}

uint64_t effective_seed(uint64_t scenario_seed) {
  if (const char* env = std::getenv("ELNETSIM_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return scenario_seed;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
  }
  check_keys(j, "", {"graph", "model", "models", "protocol", "reference",
                     "initial", "integrator"});
  Scenario s;
  s.name = name;
  s.scenario_json = j.dump();
  s.net = parse_graph(require(j, "", "graph"), "/graph");
  const int n = s.net.agent_dim;
  const int nn = s.net.num_vertices * n;

  if (j.contains("model") == j.contains("models")) {
    fail("", "exactly one of 'model' (shared) or 'models' (per-agent) required");
  }
  if (j.contains("model")) {
    AgentModel shared = parse_model(j.at("model"), "/model", n);
    s.models.assign(s.net.num_vertices, shared);
  } else {
    const json& arr = j.at("models");
    if (!arr.is_array() || arr.size() != static_cast<size_t>(s.net.num_vertices)) {
      fail("/models", "expected one model per agent");
    }
    for (size_t i = 0; i < arr.size(); ++i) {
      s.models.push_back(
          parse_model(arr[i], "/models/" + std::to_string(i), n));
    }
  }

  const json& proto = require(j, "", "protocol");
  check_keys(proto, "/protocol", {"protocol", "gains", "zeta_d", "zeta0"});
  s.protocol = parse_protocol_name(
      as_string(require(proto, "/protocol", "protocol"), "/protocol/protocol"),
      "/protocol/protocol");
  s.gains = parse_gains(require(proto, "/protocol", "gains"), "/protocol/gains",
                        s.net);
  try {
    controllers::validate_gains(s.gains, s.net);
  } catch (const std::invalid_argument& e) {
    fail("/protocol/gains", e.what());
  }
  const int mn = s.net.num_edges() * n;
  if (s.protocol == Protocol::NodeEdgeSpring) {
    s.zeta_d = proto.contains("zeta_d")
                   ? scalar_or_vector(proto.at("zeta_d"), "/protocol/zeta_d", mn)
                   : VectorXd::Zero(mn);
    if (proto.contains("zeta0")) {
      s.zeta0 = as_vector(proto.at("zeta0"), "/protocol/zeta0", mn);
    }
  } else if (proto.contains("zeta_d") || proto.contains("zeta0")) {
    fail("/protocol", "zeta_d/zeta0 only apply to node_edge_spring");
  }
  if ((s.protocol == Protocol::SingleSlotineLi ||
       s.protocol == Protocol::SingleBackstepping) &&
      s.net.num_vertices != 1) {
    fail("/protocol/protocol", "single-agent protocol requires num_vertices=1");
  }
  if (!graph::is_weakly_connected(s.net)) {
    fail("/graph", "graph must be weakly connected");
  }
  if ((s.protocol == Protocol::SyncSlotineLi ||
       s.protocol == Protocol::SyncBackstepping) &&
      !graph::is_strongly_connected(s.net)) {
    std::cerr << "warning: " << name
              << ": directed graph is weakly but not strongly connected\n";
  }

  s.ref = parse_reference(require(j, "", "reference"), "/reference", n);

  const json& init = require(j, "", "initial");
  std::string init_type =
      as_string(require(init, "/initial", "type"), "/initial/type");
  if (init_type == "explicit") {
    check_keys(init, "/initial", {"type", "q", "v"});
    s.q0 = as_vector(require(init, "/initial", "q"), "/initial/q", nn);
    s.v0 = init.contains("v") ? as_vector(init.at("v"), "/initial/v", nn)
                              : VectorXd::Zero(nn);
  } else if (init_type == "random") {
    check_keys(init, "/initial", {"type", "seed", "q_range", "v_range"});
    s.random_initial = true;
    s.seed = effective_seed(static_cast<uint64_t>(
        as_int(require(init, "/initial", "seed"), "/initial/seed")));
    if (init.contains("q_range")) {
      s.q0_range = as_number(init.at("q_range"), "/initial/q_range");
    }
    if (init.contains("v_range")) {
      s.v0_range = as_number(init.at("v_range"), "/initial/v_range");
    }
    // q(0) ~ U(-q_range, q_range), v(0) ~ U(-v_range, v_range), mt19937_64.
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> uq(-s.q0_range, s.q0_range);
    std::uniform_real_distribution<double> uv(-s.v0_range, s.v0_range);
    s.q0.resize(nn);
    s.v0.resize(nn);
    for (int i = 0; i < nn; ++i) s.q0(i) = uq(rng);
    for (int i = 0; i < nn; ++i) s.v0(i) = uv(rng);
  } else {
    fail("/initial/type", "expected 'explicit' or 'random'");
  }

  const json& integ = require(j, "", "integrator");
  check_keys(integ, "/integrator",
             {"method", "step", "abs_tol", "rel_tol", "horizon", "record_stride"});
  std::string method =
      as_string(require(integ, "/integrator", "method"), "/integrator/method");
  if (method == "rk4_fixed") {
    s.integ.method = integrate::Method::Rk4Fixed;
  } else if (method == "rk45_reference") {
    s.integ.method = integrate::Method::Rk45Reference;
  } else {
    fail("/integrator/method", "unknown method '" + method + "'");
  }
  s.integ.horizon =
      as_number(require(integ, "/integrator", "horizon"), "/integrator/horizon");
  if (integ.contains("step")) {
    s.integ.step = as_number(integ.at("step"), "/integrator/step");
  }
  if (integ.contains("abs_tol")) {
    s.integ.abs_tol = as_number(integ.at("abs_tol"), "/integrator/abs_tol");
  }
  if (integ.contains("rel_tol")) {
    s.integ.rel_tol = as_number(integ.at("rel_tol"), "/integrator/rel_tol");
  }
  if (integ.contains("record_stride")) {
    s.integ.record_stride =
        as_int(integ.at("record_stride"), "/integrator/record_stride");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  if (name.size() > 5 && name.ends_with(".json")) {
    name = name.substr(0, name.size() - 5);
  }
  return parse_scenario(buf.str(), name);
}

VectorXd initial_state(const Scenario& s) {
  const int nn = s.net.num_vertices * s.net.agent_dim;
  if (s.protocol != Protocol::NodeEdgeSpring) {
    VectorXd x(2 * nn);
    x << s.q0, s.v0;
    return x;
  }
  const int mn = s.net.num_edges() * s.net.agent_dim;
  VectorXd zeta0 =
      s.zeta0 ? *s.zeta0
              : VectorXd(graph::kron_lift(graph::build_incidence(s.net),
                                          s.net.agent_dim)
                             .transpose() *
                         s.q0);
  VectorXd x(2 * nn + mn);
  x << s.q0, s.v0, zeta0;
  return x;
}

integrate::Rhs make_rhs(const Scenario& s, Exec policy) {
  const int nn = s.net.num_vertices * s.net.agent_dim;
  if (s.protocol == Protocol::NodeEdgeSpring) {
    return [s, nn, policy](double t, const VectorXd& x) {
      dynamics::NetworkState state{x.head(nn), x.segment(nn, nn), t};
      controllers::EdgeSpringState espring{x.tail(x.size() - 2 * nn), s.zeta_d};
      auto d = controllers::node_edge_closed_loop_rhs(s.models, s.net, state,
                                                      espring, s.gains, s.ref,
                                                      policy);
      VectorXd dx(x.size());
      dx << d.qdot, d.vdot, d.zeta_dot;
      return dx;
    };
  }
  return [s, nn, policy](double t, const VectorXd& x) {
    dynamics::NetworkState state{x.head(nn), x.segment(nn, nn), t};
    VectorXd tau = torque_at(s, t, x);
    auto [qdot, vdot] = dynamics::network_rhs(s.models, state, tau, policy);
    VectorXd dx(2 * nn);
    dx << qdot, vdot;
    return dx;
  };
}

VectorXd torque_at(const Scenario& s, double t, const VectorXd& x) {
  const int nn = s.net.num_vertices * s.net.agent_dim;
  dynamics::NetworkState state{x.head(nn), x.segment(nn, nn), t};
  if (s.protocol == Protocol::NodeEdgeSpring) {
    controllers::EdgeSpringState espring{x.tail(x.size() - 2 * nn), s.zeta_d};
    return controllers::node_edge_closed_loop_rhs(s.models, s.net, state,
                                                  espring, s.gains, s.ref)
        .tau;
  }
  auto sv = controllers::sync_sliding(s.net, s.gains, state, s.ref);
  VectorXd u = -s.gains.ext_input_gain * sv.s;
  if (s.protocol == Protocol::SyncBackstepping ||
      s.protocol == Protocol::SingleBackstepping) {
    return controllers::sync_backstepping_control(s.models, s.net, s.gains,
                                                  state, s.ref, u);
  }
  return controllers::sync_slotine_li_control(s.models, s.net, s.gains, state,
                                              s.ref, u);
}

std::pair<SimTrace, CertificationReport> run_scenario(const Scenario& s,
                                                      Exec policy) {
  SimTrace trace = integrate::simulate(make_rhs(s, policy), initial_state(s),
                                       s.integ);
  trace.metadata = "scenario=" + s.name;
  for (size_t k = 0; k < trace.times.size(); ++k) {
    trace.taus.push_back(torque_at(s, trace.times[k], trace.states[k]));
  }
  CertificationReport rep;
  if (trace.blew_up || trace.times.size() < 3) {
    rep.passed = false;
    trace.storage.assign(trace.times.size(), 0.0);
    return {trace, rep};
  }
  analysis::CertifyOptions opts;
  opts.policy = policy;
  rep = analysis::certify_trace(trace, s.protocol, s.gains, s.net, s.models,
                                s.ref, s.zeta_d, opts);
  trace.storage = rep.storage;
  return {trace, rep};
}

namespace {

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string trace_to_csv(const SimTrace& trace, const Scenario& s) {
  const int nn = s.net.num_vertices * s.net.agent_dim;
  const int mn = s.protocol == Protocol::NodeEdgeSpring
                     ? s.net.num_edges() * s.net.agent_dim
                     : 0;
  std::string out = "t";
  for (int i = 1; i <= nn; ++i) out += ",q_" + std::to_string(i);
  for (int i = 1; i <= nn; ++i) out += ",v_" + std::to_string(i);
  for (int i = 1; i <= mn; ++i) out += ",zeta_" + std::to_string(i);
  for (int i = 1; i <= nn; ++i) out += ",tau_" + std::to_string(i);
  out += ",S\n";
  for (size_t k = 0; k < trace.times.size(); ++k) {
    out += fmt17(trace.times[k]);
    const VectorXd& x = trace.states[k];
    for (int i = 0; i < 2 * nn + mn; ++i) out += "," + fmt17(x(i));
    const VectorXd& tau = trace.taus.at(k);
    for (int i = 0; i < nn; ++i) out += "," + fmt17(tau(i));
    out += "," + fmt17(k < trace.storage.size() ? trace.storage[k] : 0.0);
    out += "\n";
  }
  return out;
}

void emit_csv(const SimTrace& trace, const Scenario& s,
              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << trace_to_csv(trace, s);
}

SimTrace parse_csv(const std::string& text, const Scenario& s) {
  const int nn = s.net.num_vertices * s.net.agent_dim;
  const int mn = s.protocol == Protocol::NodeEdgeSpring
                     ? s.net.num_edges() * s.net.agent_dim
                     : 0;
  const int cols = 1 + 2 * nn + mn + nn + 1;
  SimTrace trace;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> fields;
    const char* p = line.c_str();
    char* end = nullptr;
    while (true) {
      fields.push_back(std::strtod(p, &end));
      if (*end != ',') break;
      p = end + 1;
    }
    if (static_cast<int>(fields.size()) != cols) {
      throw std::runtime_error("csv: expected " + std::to_string(cols) +
                               " columns, got " + std::to_string(fields.size()));
    }
    trace.times.push_back(fields[0]);
    VectorXd x(2 * nn + mn);
    for (int i = 0; i < 2 * nn + mn; ++i) x(i) = fields[1 + i];
    trace.states.push_back(x);
    VectorXd tau(nn);
    for (int i = 0; i < nn; ++i) tau(i) = fields[1 + 2 * nn + mn + i];
    trace.taus.push_back(tau);
    trace.storage.push_back(fields[cols - 1]);
  }
  return trace;
}

SimTrace load_csv(const std::string& path, const Scenario& s) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), s);
}

std::string trace_to_svg(const SimTrace& trace, const Scenario& s) {
  if (trace.times.size() < 2) {
    throw std::invalid_argument("plot: trace has fewer than 2 samples");
  }
  const int nn = s.net.num_vertices * s.net.agent_dim;
  const double width = 800, height = 500;
  const double ml = 60, mr = 140, mt = 20, mb = 45;
  double t0 = trace.times.front(), t1 = trace.times.back();
  double q_lo = trace.states[0].head(nn).minCoeff();
  double q_hi = trace.states[0].head(nn).maxCoeff();
  for (const auto& x : trace.states) {
    q_lo = std::min(q_lo, x.head(nn).minCoeff());
    q_hi = std::max(q_hi, x.head(nn).maxCoeff());
  }
  if (q_hi - q_lo < 1e-12) {
    q_lo -= 0.5;
    q_hi += 0.5;
  }
  auto sx = [&](double t) { return ml + (t - t0) / (t1 - t0) * (width - ml - mr); };
  auto sy = [&](double q) {
    return height - mb - (q - q_lo) / (q_hi - q_lo) * (height - mt - mb);
  };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                  "#bcbd22", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", t1);
  svg << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 20
      << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 8
      << "\" font-size=\"13\" text-anchor=\"middle\">t [s]</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", q_hi);
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
      << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", q_lo);
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << height - mb
      << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
  for (int i = 0; i < nn; ++i) {
    const char* color = palette[i % 10];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < trace.times.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(trace.times[k]),
                    sy(trace.states[k](i)));
      svg << buf;
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - mr + 10 << "\" y=\"" << mt + 15 + 16 * i
        << "\" font-size=\"12\" fill=\"" << color << "\">q_" << i + 1
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const SimTrace& trace, const Scenario& s,
               const std::string& path) {
  std::string svg = trace_to_svg(trace, s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg;
}

}  // namespace elnet::scenario
