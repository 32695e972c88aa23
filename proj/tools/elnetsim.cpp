#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "elnet/scenario.hpp"

namespace fs = std::filesystem;
using namespace elnet;

namespace {

int run_one(const std::string& path, const std::string& out_dir) {
  scenario::Scenario s = scenario::load_scenario(path);
  auto [trace, report] = scenario::run_scenario(s);
  fs::create_directories(out_dir);
  const std::string base = out_dir + "/" + s.name;
  scenario::emit_csv(trace, s, base + ".csv");
  std::ofstream(base + "_report.json") << report.to_json() << "\n";
  if (!trace.blew_up) scenario::emit_plot(trace, s, base + ".svg");
  std::cout << s.name << ": " << (report.passed ? "PASS" : "FAIL")
            << " (S0=" << (trace.storage.empty() ? 0.0 : trace.storage.front())
            << ", Sfinal=" << (trace.storage.empty() ? 0.0 : trace.storage.back())
            << ", max residual=" << report.max_residual << ")\n";
  if (trace.blew_up) {
    std::cerr << s.name << ": state blew up, partial trace persisted\n";
  }
  return report.passed ? 0 : 1;
}

int cmd_run(const std::vector<std::string>& paths, const std::string& out_dir,
            int jobs) {
  std::atomic<int> worst{0};
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < paths.size(); i = next.fetch_add(1)) {
      int rc;
      try {
        rc = run_one(paths[i], out_dir);
      } catch (const std::exception& e) {
        std::cerr << "error: " << paths[i] << ": " << e.what() << "\n";
        rc = 2;
      }
      int cur = worst.load();
      while (rc > cur && !worst.compare_exchange_weak(cur, rc)) {
      }
    }
  };
  if (jobs <= 1 || paths.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < std::min<int>(jobs, paths.size()); ++i) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) t.join();
  }
  return worst.load();
}

int cmd_certify(const std::string& trace_path, const std::string& scenario_path) {
  scenario::Scenario s = scenario::load_scenario(scenario_path);
  integrate::SimTrace trace = scenario::load_csv(trace_path, s);
  auto report = analysis::certify_trace(trace, s.protocol, s.gains, s.net,
                                        s.models, s.ref, s.zeta_d);
  std::cout << report.to_json() << "\n";
  return report.passed ? 0 : 1;
}

int cmd_rates(const std::string& scenario_path) {
  scenario::Scenario s = scenario::load_scenario(scenario_path);
  analysis::RateBounds rb;
  if (s.protocol == controllers::Protocol::NodeEdgeSpring) {
    rb = analysis::rate_bounds_node_edge(s.gains, s.models);
  } else {
    rb = analysis::rate_bounds_sync(s.gains, s.net, s.models);
  }
  std::cout << "k1 = " << rb.k1 << "\nk2 = " << rb.k2 << "\nk3 = " << rb.k3
            << "\nbeta = " << rb.beta << "\n";
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  scenario::Scenario s = scenario::load_scenario(scenario_path);
  std::cout << s.name << ": valid (N=" << s.net.num_vertices
            << ", n=" << s.net.agent_dim << ", M=" << s.net.num_edges()
            << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Networked Euler-Lagrange tracking-control simulator"};
  app.require_subcommand(1);

  std::vector<std::string> run_paths;
  std::string out_dir = ".";
  int jobs = 1;
  auto* run = app.add_subcommand("run", "simulate scenarios and certify them");
  run->add_option("scenarios", run_paths, "scenario JSON files")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "scenarios to run concurrently");

  std::string trace_path, scenario_path;
  auto* certify = app.add_subcommand("certify", "certify an existing trace CSV");
  certify->add_option("trace", trace_path, "trace CSV")->required();
  certify->add_option("scenario", scenario_path, "scenario JSON")->required();

  std::string rates_path;
  auto* rates = app.add_subcommand("rates", "print k1,k2,k3,beta for a scenario");
  rates->add_option("scenario", rates_path, "scenario JSON")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("scenario", validate_path, "scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(run_paths, out_dir, jobs);
    if (*certify) return cmd_certify(trace_path, scenario_path);
    if (*rates) return cmd_rates(rates_path);
    if (*validate) return cmd_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
