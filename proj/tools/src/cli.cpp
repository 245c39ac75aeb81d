#include "argus/tools/cli.hpp"

#include <csignal>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "argus/bench.hpp"
#include "argus/io.hpp"
#include "argus/tools/pipeline.hpp"
#include "argus/tools/service.hpp"
#include "argus/waypoints.hpp"

namespace argus::tools {
namespace {

struct ScenarioArgs {
  std::string scenario;
  std::string terrain;
  std::string threats;
  std::string mobility;
  std::string generate;  // "ROWSxCOLS"
  std::uint64_t seed = 1;
  int n_threats = 4;

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "Scenario JSON (terrain, threats, optional mobility)");
    app->add_option("--terrain", terrain, "Terrain JSON");
    app->add_option("--threats", threats, "Threats JSON");
    app->add_option("--mobility", mobility, "Mobility JSON (defaults when omitted)");
    app->add_option("--generate", generate, "Generate a random ROWSxCOLS scenario instead of loading one");
    app->add_option("--seed", seed, "Seed for --generate");
    app->add_option("--n-threats", n_threats, "Threat count for --generate");
  }

  Scenario load() const {
    if (!generate.empty()) {
      int rows = 0, cols = 0;
      char x = 0;
      std::istringstream in(generate);
      if (!(in >> rows >> x >> cols) || (x != 'x' && x != 'X')) {
        throw ValidationError("--generate", "expected ROWSxCOLS, got '" + generate + "'");
      }
      bench::InstanceOptions o;
      o.rows = rows;
      o.cols = cols;
      o.n_threats = n_threats;
      o.seed = seed;
      return bench::generate_instance(o).scenario;
    }
    if (!scenario.empty()) return scenario_from_json(io::read_json_file(scenario));
    if (terrain.empty()) throw ValidationError("--terrain", "need --scenario, --terrain or --generate");
    TerrainGrid grid = io::load_grid(terrain);
    MobilityModel m = mobility.empty() ? MobilityModel::defaults() : io::load_mobility(mobility);
    std::vector<ThreatSpec> t = threats.empty() ? std::vector<ThreatSpec>{} : io::load_threats(threats);
    return Scenario::create(std::move(grid), std::move(m), std::move(t));
  }
};

struct SolverArgs {
  double timeout_s = 600.0;
  int bucket_target = 8192;

  void add(CLI::App* app) {
    app->add_option("--timeout-s", timeout_s, "Solver timeout in seconds");
    app->add_option("--bucket-target", bucket_target, "Target number of time buckets");
  }
  SolverConfig config() const {
    SolverConfig c;
    c.timeout_s = timeout_s;
    c.bucket_count_target = bucket_target;
    c.validate();
    return c;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

Service* g_service = nullptr;
extern "C" void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"argus: risk-aware UGV mission planner"};
  app.require_subcommand(1);

  ScenarioArgs scen;
  SolverArgs solver;
  std::string out_path;
  std::string mission_path;
  std::string waypoints_path;
  int decimate = 1;

  auto* plan = app.add_subcommand("plan", "Plan a mission");
  scen.add(plan);
  solver.add(plan);
  plan->add_option("--mission", mission_path, "Mission request JSON")->required();
  plan->add_option("--out", out_path, "Result JSON path (stdout when omitted)");
  plan->add_option("--waypoints", waypoints_path, "Also write a QGC WPL 110 waypoint file");
  plan->add_option("--decimate", decimate, "Keep every k-th path cell in the waypoint file")->check(CLI::PositiveNumber);

  double formation_width = 0.0;
  auto* riskfield = app.add_subcommand("riskfield", "Emit risk rasters");
  scen.add(riskfield);
  riskfield->add_option("--formation-width", formation_width, "Formation width in meters");
  riskfield->add_option("--out", out_path, "Output JSON path");

  std::string result_path;
  std::string event_path;
  auto* patch = app.add_subcommand("patch", "Repair a plan after a dynamic event");
  scen.add(patch);
  solver.add(patch);
  patch->add_option("--result", result_path, "Original result JSON")->required();
  patch->add_option("--event", event_path, "Event JSON")->required();
  patch->add_option("--out", out_path, "Output JSON path");
  patch->add_option("--waypoints", waypoints_path, "Waypoint file for the repaired plan");
  patch->add_option("--decimate", decimate, "Keep every k-th path cell in the waypoint file")->check(CLI::PositiveNumber);

  std::string sizes = "32,64,128,256";
  std::string alphas = "0.1,0.2,0.5";
  std::string seeds = "1";
  std::size_t oracle_max_nodes = 25;
  bool no_baseline = false;
  std::string table_path;
  auto* bench = app.add_subcommand("bench", "Run the benchmark sweep");
  bench->add_option("--sizes", sizes, "Comma-separated square grid sizes");
  bench->add_option("--alphas", alphas, "Comma-separated budget slacks");
  bench->add_option("--seeds", seeds, "Comma-separated instance seeds");
  bench->add_option("--seed", seeds, "Single instance seed");
  bench->add_option("--oracle-max-nodes", oracle_max_nodes, "Largest graph handed to the exhaustive oracle");
  bench->add_flag("--no-baseline", no_baseline, "Skip the label-correcting baseline");
  bench->add_option("--out", out_path, "CSV output path");
  bench->add_option("--table", table_path, "Rendered tables output path (stdout when omitted)");
  solver.add(bench);

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string state_dir;
  int workers = 0;
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--state-dir", state_dir, "Persist scenarios here (or ARGUS_STATE_DIR)");
  serve->add_option("--workers", workers, "Concurrent solves (default: logical cores)");
  solver.add(serve);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int rc = app.exit(e, help, err);
    out << help.str();
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*plan) {
      const Scenario s = scen.load();
      const MissionRequest req = io::load_mission(mission_path);
      const PlanResult r = run_plan(s, req, solver.config());
      emit(io::dump(io::result_to_json(r)), out_path, out);
      if (!waypoints_path.empty()) io::write_text_file(waypoints_path, export_waypoints(s.grid, r.path, decimate));
      if (r.anytime) {
        err << "timeout: solver limit hit; wrote best path found\n";
        return exit_code(Failure::kTimeout);
      }
      return 0;
    }
    if (*riskfield) {
      const Scenario s = scen.load();
      if (!(formation_width >= 0.0)) throw ValidationError("--formation-width", "must be >= 0");
      emit(io::dump(riskfield_output(s, formation_width)), out_path, out);
      return 0;
    }
    if (*patch) {
      const Scenario s = scen.load();
      const PlanResult original = io::load_result(result_path);
      const DynamicEvent ev = io::load_event(event_path);
      const ComparisonReport report = run_patch(s, original, ev, solver.config());
      emit(io::dump(patch_output(report)), out_path, out);
      if (!waypoints_path.empty()) {
        io::write_text_file(waypoints_path, export_waypoints(s.grid, report.patch.plan.path, decimate));
      }
      return 0;
    }
    if (*bench) {
      bench::SweepOptions o;
      o.sizes.clear();
      for (const auto& v : split(sizes)) o.sizes.push_back(std::stoi(v));
      o.alphas.clear();
      for (const auto& v : split(alphas)) o.alphas.push_back(std::stod(v));
      o.seeds.clear();
      for (const auto& v : split(seeds)) o.seeds.push_back(std::stoull(v));
      if (o.sizes.empty() || o.alphas.empty() || o.seeds.empty()) {
        throw ValidationError("--sizes", "sizes, alphas and seeds must be non-empty");
      }
      o.timeout_s = solver.timeout_s;
      o.oracle_max_nodes = oracle_max_nodes;
      o.run_baseline = !no_baseline;
      o.solver = solver.config();
      const bench::SweepReport report = bench::run_sweep(o);
      if (!out_path.empty()) io::write_text_file(out_path, report.to_csv());
      const std::string tables =
          "baseline: " + report.baseline_name + "\n\n" + report.runtime_table() + "\n" + report.optimality_table();
      emit(tables, table_path, out);
      return 0;
    }
    if (*serve) {
      ServiceConfig cfg;
      cfg.state_dir = resolve_state_dir(state_dir);
      cfg.workers = workers;
      cfg.solver = solver.config();
      Service service(cfg);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      err << "argus: serving on " << host << ":" << port << " with " << service.workers() << " solve workers\n";
      const bool ok = service.listen(host, port);
      g_service = nullptr;
      if (!ok) {
        err << "error: could not listen on " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: invalid number: " << e.what() << "\n";
    return 2;
  } catch (...) {
    const ErrorInfo info = classify(std::current_exception());
    err << "error: " << info.message << "\n";
    return exit_code(info.kind);
  }
  return 0;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace argus::tools
