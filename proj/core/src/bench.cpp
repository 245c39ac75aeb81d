#include "argus/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "argus/errors.hpp"

namespace argus::bench {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}
void mix(std::uint64_t& h, double v) { mix(h, std::bit_cast<std::uint64_t>(v)); }

TerrainGrid random_terrain(const InstanceOptions& o, std::mt19937_64& rng) {
  TerrainGrid grid = TerrainGrid::flat(o.rows, o.cols, o.cell_size, 0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int size = std::max(o.rows, o.cols);

  // Elevation: a handful of broad Gaussian hills, kept well under max slope.
  const int hills = 3 + size / 16;
  for (int h = 0; h < hills; ++h) {
    const double cr = u01(rng) * o.rows;
    const double cc = u01(rng) * o.cols;
    const double sigma = (0.08 + 0.12 * u01(rng)) * size + 2.0;
    const double height = (u01(rng) * 2.0 - 0.5) * 0.15 * sigma * o.cell_size;
    for (int r = 0; r < o.rows; ++r) {
      for (int c = 0; c < o.cols; ++c) {
        const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
        grid.elevation(r, c) += height * std::exp(-d2 / (2.0 * sigma * sigma));
      }
    }
  }

  // Land cover: Voronoi patches over classes 0..3.
  struct Seed {
    double r, c;
    int cls;
  };
  std::vector<Seed> seeds(static_cast<std::size_t>(4 + size / 6));
  std::discrete_distribution<int> cls({4.0, 3.0, 1.5, 2.0});
  for (auto& s : seeds) s = {u01(rng) * o.rows, u01(rng) * o.cols, cls(rng)};
  for (int r = 0; r < o.rows; ++r) {
    for (int c = 0; c < o.cols; ++c) {
      double best = kInfinity;
      for (const auto& s : seeds) {
        const double d2 = (r - s.r) * (r - s.r) + (c - s.c) * (c - s.c);
        if (d2 < best) {
          best = d2;
          grid.land_cover(r, c) = s.cls;
        }
      }
    }
  }

  // Obstacles: small square blobs until the target fraction is reached.
  const auto target = static_cast<std::size_t>(o.obstacle_fraction * o.rows * o.cols);
  std::size_t placed = 0;
  std::uniform_int_distribution<int> rr(0, o.rows - 1), cc(0, o.cols - 1), side(1, 3);
  for (int attempt = 0; placed < target && attempt < 10000; ++attempt) {
    const int r0 = rr(rng), c0 = cc(rng), s = side(rng);
    for (int r = r0; r < std::min(o.rows, r0 + s); ++r) {
      for (int c = c0; c < std::min(o.cols, c0 + s); ++c) {
        if (grid.obstacle(r, c) == 0) {
          grid.obstacle(r, c) = 1;
          ++placed;
        }
      }
    }
  }
  grid.obstacle(0, 0) = 0;
  grid.obstacle(o.rows - 1, o.cols - 1) = 0;
  return grid;
}

std::vector<ThreatSpec> random_threats(const InstanceOptions& o, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> rr(0, o.rows - 1), cc(0, o.cols - 1);
  const double size = std::max(o.rows, o.cols);
  std::vector<ThreatSpec> threats;
  for (int i = 0; i < o.n_threats; ++i) {
    ThreatSpec t;
    t.id = "T" + std::to_string(i + 1);
    // 150-500 m on large grids, shrunk so small grids keep some structure.
    const double lo = std::min(6.0, std::max(1.5, 0.3 * size));
    const double hi = std::min(20.0, std::max(3.0, 0.8 * size));
    const double range_cells = lo + (hi - lo) * u01(rng);
    t.detection = {range_cells * o.cell_size, 0.2 + 0.3 * u01(rng), 1.0 + 2.0 * u01(rng)};
    t.impact = 0.6 + 0.4 * u01(rng);
    const Cell centre{rr(rng), cc(rng)};
    const int spread = static_cast<int>(u01(rng) * 3.0);
    for (int dr = -spread; dr <= spread; ++dr) {
      for (int dc = -spread; dc <= spread; ++dc) {
        const Cell cell{centre.row + dr, centre.col + dc};
        if (cell.row < 0 || cell.row >= o.rows || cell.col < 0 || cell.col >= o.cols) continue;
        t.prior.push_back({cell, 0.2 + u01(rng)});
      }
    }
    threats.push_back(std::move(t));
  }
  return threats;
}

}  // namespace

std::uint64_t BenchInstance::hash() const {
  std::uint64_t h = kFnvOffset;
  const auto& g = scenario.grid;
  mix(h, static_cast<std::uint64_t>(g.rows()));
  mix(h, static_cast<std::uint64_t>(g.cols()));
  mix(h, g.cell_size());
  for (double e : g.elevation.values()) mix(h, e);
  for (int lc : g.land_cover.values()) mix(h, static_cast<std::uint64_t>(lc));
  for (auto ob : g.obstacle.values()) mix(h, static_cast<std::uint64_t>(ob));
  for (const auto& t : scenario.threats) {
    for (char ch : t.id) mix(h, static_cast<std::uint64_t>(ch));
    mix(h, t.detection.range_m);
    mix(h, t.detection.plateau_fraction);
    mix(h, t.detection.decay_exponent);
    mix(h, t.impact);
    for (const auto& p : t.prior) {
      mix(h, static_cast<std::uint64_t>(p.cell.row));
      mix(h, static_cast<std::uint64_t>(p.cell.col));
      mix(h, p.weight);
    }
  }
  mix(h, static_cast<std::uint64_t>(start));
  mix(h, static_cast<std::uint64_t>(goal));
  return h;
}

BenchInstance make_instance(Scenario scenario, double formation_width_m, Cell start, Cell goal) {
  BenchInstance inst;
  inst.options.rows = scenario.grid.rows();
  inst.options.cols = scenario.grid.cols();
  inst.options.cell_size = scenario.grid.cell_size();
  inst.options.n_threats = static_cast<int>(scenario.threats.size());
  inst.options.formation_width_m = formation_width_m;
  inst.graph = scenario.risk_graph(formation_width_m);
  inst.start = inst.graph.node_at(start);
  inst.goal = inst.graph.node_at(goal);
  if (inst.start == kNoNode || inst.goal == kNoNode) throw ValidationError("start", "start or goal is not a free cell");
  inst.t_min = reverse_min_time(inst.graph, inst.goal)[static_cast<std::size_t>(inst.start)];
  if (!std::isfinite(inst.t_min)) throw NoPathError("goal unreachable from start");
  inst.scenario = std::move(scenario);
  return inst;
}

BenchInstance generate_instance(const InstanceOptions& options) {
  if (options.rows < 2 || options.cols < 2) throw ValidationError("rows", "instance needs at least 2x2 cells");
  if (options.n_threats < 0) throw ValidationError("n_threats", "must be >= 0");
  std::mt19937_64 rng(options.seed);
  TerrainGrid grid = random_terrain(options, rng);
  std::vector<ThreatSpec> threats = random_threats(options, rng);
  const Cell start{0, 0};
  const Cell goal{options.rows - 1, options.cols - 1};

  auto scenario = Scenario::create(grid, MobilityModel::defaults(), threats);
  const NodeId s = scenario.graph.node_at(start);
  const NodeId g = scenario.graph.node_at(goal);
  if (!std::isfinite(reverse_min_time(scenario.graph, g)[static_cast<std::size_t>(s)])) {
    // Obstacles cut the corners apart; drop them rather than reseed.
    for (auto& ob : grid.obstacle.data()) ob = 0;
    scenario = Scenario::create(std::move(grid), MobilityModel::defaults(), std::move(threats));
  }
  BenchInstance inst = make_instance(std::move(scenario), options.formation_width_m, start, goal);
  inst.options = options;
  return inst;
}

BenchInstance generate_instance(int rows, int cols, int n_threats, std::uint64_t seed) {
  InstanceOptions o;
  o.rows = rows;
  o.cols = cols;
  o.n_threats = n_threats;
  o.seed = seed;
  return generate_instance(o);
}

namespace {

double relative_gap(double value, double reference) {
  if (std::abs(reference) < 1e-12) return std::abs(value - reference);
  return (value - reference) / std::abs(reference);
}

}  // namespace

SweepReport run_sweep(const SweepOptions& options) {
  SweepReport report;
  for (int size : options.sizes) {
    for (std::uint64_t seed : options.seeds) {
      InstanceOptions io;
      io.rows = io.cols = size;
      const int spacing = std::max(1, options.threat_spacing);
      io.n_threats = std::max(2, (size * size) / (spacing * spacing));
      io.seed = seed;
      const BenchInstance inst = generate_instance(io);
      const HeuristicMaps heur = precompute_heuristics(inst.graph, inst.goal);

      for (double alpha : options.alphas) {
        const double budget = inst.budget(alpha);
        SweepRow base;
        base.rows = base.cols = size;
        base.seed = seed;
        base.alpha = alpha;
        base.t_min_s = inst.t_min;
        base.budget_s = budget;

        std::optional<double> reference;
        std::string reference_name;
        if (inst.graph.node_count() <= options.oracle_max_nodes) {
          if (auto o = oracle_optimal(inst.graph, inst.start, inst.goal, budget, options.oracle_max_nodes)) {
            reference = o->log_risk;
            reference_name = "oracle";
          }
        }

        if (options.run_baseline) {
          SweepRow row = base;
          row.solver = "baseline";
          const BaselineResult b =
              solve_label_correcting(inst.graph, inst.start, inst.goal, budget, options.timeout_s);
          row.wall_s = b.wall_time_s;
          row.expansions = b.labels_expanded;
          row.timed_out = b.timed_out;
          row.log_risk = b.log_risk;
          row.time_s = b.time_s;
          row.budget_ok = b.path.empty() || b.time_s <= budget + kBudgetTolerance;
          if (!b.timed_out && !b.path.empty() && !reference) {
            reference = b.log_risk;
            reference_name = "label-correcting";
          }
          report.rows.push_back(row);
        }

        SweepRow row = base;
        row.solver = "apulse";
        SolverConfig cfg = options.solver;
        cfg.timeout_s = options.timeout_s;
        try {
          const SolveResult r = solve(inst.graph, inst.start, inst.goal, budget, cfg, &heur);
          row.wall_s = r.stats.wall_time_s;
          row.expansions = r.stats.labels_expanded;
          row.pruned_feasibility = r.stats.pruned_feasibility;
          row.pruned_optimality = r.stats.pruned_optimality;
          row.pruned_dominance = r.stats.pruned_dominance;
          row.timed_out = r.anytime;
          row.log_risk = r.total_log_risk;
          row.time_s = r.total_time_s;
          row.budget_ok = r.total_time_s <= budget + kBudgetTolerance;
        } catch (const ResourceExhaustedError&) {
          row.timed_out = true;
          row.wall_s = options.timeout_s;
        }
        if (reference) {
          for (auto& prev : report.rows) {
            if (prev.rows == size && prev.seed == seed && prev.alpha == alpha && prev.solver == "baseline" &&
                !prev.timed_out) {
              prev.reference = reference_name;
              prev.reference_risk = reference;
              prev.gap = relative_gap(prev.log_risk, *reference);
            }
          }
          if (!row.timed_out || row.time_s > 0.0) {
            row.reference = reference_name;
            row.reference_risk = reference;
            row.gap = relative_gap(row.log_risk, *reference);
          }
        }
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

std::string SweepReport::to_csv() const {
  std::ostringstream out;
  out << "rows,cols,seed,alpha,solver,t_min_s,budget_s,wall_s,expansions,pruned_feasibility,pruned_optimality,"
         "pruned_dominance,log_risk,time_s,timed_out,budget_ok,reference,reference_risk,gap\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%llu,%.3f,%s,%.6f,%.6f,%.6f,%llu,%llu,%llu,%llu,%.12g,%.6f,%d,%d,%s,",
                  r.rows, r.cols, static_cast<unsigned long long>(r.seed), r.alpha, r.solver.c_str(), r.t_min_s,
                  r.budget_s, r.wall_s, static_cast<unsigned long long>(r.expansions),
                  static_cast<unsigned long long>(r.pruned_feasibility),
                  static_cast<unsigned long long>(r.pruned_optimality),
                  static_cast<unsigned long long>(r.pruned_dominance), r.log_risk, r.time_s, r.timed_out ? 1 : 0,
                  r.budget_ok ? 1 : 0, r.reference.c_str());
    out << buf;
    if (r.reference_risk) {
      std::snprintf(buf, sizeof buf, "%.12g", *r.reference_risk);
      out << buf;
    }
    out << ',';
    if (r.gap) {
      std::snprintf(buf, sizeof buf, "%.6g", *r.gap);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string SweepReport::runtime_table() const {
  // Mean wall time per (size, solver) and alpha.
  std::map<std::pair<int, std::string>, std::map<double, std::pair<double, int>>> cells;
  std::map<std::pair<int, std::string>, std::map<double, int>> timeouts;
  std::vector<double> alphas;
  for (const auto& r : rows) {
    auto& c = cells[{r.rows, r.solver}][r.alpha];
    c.first += r.wall_s;
    c.second += 1;
    if (r.timed_out) ++timeouts[{r.rows, r.solver}][r.alpha];
    if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) alphas.push_back(r.alpha);
  }
  std::sort(alphas.begin(), alphas.end());
  std::ostringstream out;
  char buf[128];
  out << "Runtime (s, mean over seeds; * = at least one timeout)\n";
  std::snprintf(buf, sizeof buf, "%-10s %-10s", "grid", "solver");
  out << buf;
  for (double a : alphas) {
    std::snprintf(buf, sizeof buf, " %12s", ("alpha=" + std::to_string(a).substr(0, 4)).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& [key, by_alpha] : cells) {
    std::snprintf(buf, sizeof buf, "%-10s %-10s", (std::to_string(key.first) + "x" + std::to_string(key.first)).c_str(),
                  key.second.c_str());
    out << buf;
    for (double a : alphas) {
      auto it = by_alpha.find(a);
      if (it == by_alpha.end()) {
        std::snprintf(buf, sizeof buf, " %12s", "-");
      } else {
        const bool t = timeouts[key][a] > 0;
        std::snprintf(buf, sizeof buf, " %11.3f%s", it->second.first / it->second.second, t ? "*" : " ");
      }
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string SweepReport::optimality_table() const {
  std::map<std::pair<int, std::string>, std::pair<int, int>> counts;  // optimal, compared
  std::map<std::pair<int, std::string>, double> worst;
  for (const auto& r : rows) {
    if (!r.gap) continue;
    auto& c = counts[{r.rows, r.solver}];
    c.second += 1;
    if (std::abs(*r.gap) <= 1e-9) c.first += 1;
    auto& w = worst[{r.rows, r.solver}];
    w = std::max(w, *r.gap);
  }
  std::ostringstream out;
  char buf[160];
  out << "Optimality against exact reference\n";
  std::snprintf(buf, sizeof buf, "%-10s %-10s %10s %10s %14s\n", "grid", "solver", "optimal", "compared", "worst gap");
  out << buf;
  for (const auto& [key, c] : counts) {
    std::snprintf(buf, sizeof buf, "%-10s %-10s %10d %10d %14.3e\n",
                  (std::to_string(key.first) + "x" + std::to_string(key.first)).c_str(), key.second.c_str(), c.first,
                  c.second, worst[key]);
    out << buf;
  }
  return out.str();
}

}  // namespace argus::bench
