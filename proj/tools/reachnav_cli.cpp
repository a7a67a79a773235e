// reachnav command-line front end.
//
// Exit codes: 0 success, 1 validation / usage / I/O error, 2 numerical
// failure (non-convergence, infeasible problem, planning failure).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reachnav/binary_io.hpp"
#include "reachnav/config.hpp"
#include "reachnav/distance.hpp"
#include "reachnav/export.hpp"
#include "reachnav/field_io.hpp"
#include "reachnav/hash.hpp"

namespace fs = std::filesystem;
using namespace reachnav;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool quiet = false;
};

struct Context {
  AppConfig cfg;
  fs::path out;
  std::string provenance;
  bool quiet = false;

  void log(const std::string& msg) const {
    if (!quiet) std::cerr << msg << "\n";
  }
  void write(const std::string& name, const std::string& body) const {
    io::write_text(out / name, "# " + provenance + "\n" + body);
  }
  ValueCache cache() const {
    return ValueCache(ValueCache::dir_from_env(out / "cache"));
  }
};

Context make_context(const Common& c, const std::string& command) {
  Context ctx;
  ctx.cfg = load_config(c.config);
  if (c.seed) apply_seed(ctx.cfg, *c.seed);
  if (c.workers) apply_workers(ctx.cfg, *c.workers);
  ctx.out = c.out;
  ctx.quiet = c.quiet;
  fs::create_directories(ctx.out);
  ctx.provenance = std::string("reachnav ") + REACHNAV_VERSION + " command " +
                   command + " config " + config_hash(ctx.cfg) + " seed " +
                   std::to_string(ctx.cfg.bench.seed);
  io::write_text(ctx.out / "config.json", config_json(ctx.cfg) + "\n");
  return ctx;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int nearest_node(const Grid4D& g, int d, double x) {
  const Axis& a = g.axis(d);
  double t = (x - a.lo) / g.spacing(d);
  if (a.periodic) {
    long k = std::lround(t) % a.count;
    return static_cast<int>(k < 0 ? k + a.count : k);
  }
  return std::clamp(static_cast<int>(std::lround(t)), 0, a.count - 1);
}

void cmd_solve(const Context& ctx) {
  const ResolvedScenario sc = resolve_scenario(ctx.cfg);
  const ExpertSettings& s = ctx.cfg.bench.expert;
  const DynamicsBounds b =
      ctx.cfg.scenario.disturbance ? s.bounds : s.bounds.without_disturbance();
  const Grid4D grid = grid_for_map(sc.map, b, s.v_count, s.phi_count);
  ctx.log(fmt("solving TTR on %d x %d x %d x %d nodes", grid.count(kX),
              grid.count(kY), grid.count(kV), grid.count(kPhi)));
  SolveReport rt, rc;
  const ValueField ttr = solve_ttr(grid, b, sc.goal, sc.map, s.solve, &rt);
  ctx.log(fmt("TTR converged in %d cycles", rt.cycles));
  const ValueField ttc = solve_ttc(grid, b, sc.map, s.solve, &rc);
  ctx.log(fmt("TTC converged in %d cycles", rc.cycles));
  write_field(ttr, ctx.out / "ttr.vf");
  write_field(ttc, ctx.out / "ttc.vf");
  write_map(sc.map, ctx.out / "map.rnm");
  std::string log = "field,cycle,residual\n";
  for (std::size_t k = 0; k < rt.residuals.size(); ++k)
    log += fmt("ttr,%zu,%.9g\n", k + 1, rt.residuals[k]);
  for (std::size_t k = 0; k < rc.residuals.size(); ++k)
    log += fmt("ttc,%zu,%.9g\n", k + 1, rc.residuals[k]);
  ctx.write("residuals.csv", log);
}

void cmd_cost(const Context& ctx) {
  const ResolvedScenario sc = resolve_scenario(ctx.cfg);
  ValueCache cache = ctx.cache();
  const CostMap cost = build_cost_map(sc.map, sc.goal, ctx.cfg.scenario.cost,
                                      ctx.cfg.scenario.disturbance,
                                      ctx.cfg.bench.expert, &cache);
  const ValueField dense = cost.materialize();
  write_field(dense, ctx.out / "cost.vf");
  const int vi = nearest_node(dense.grid(), kV, sc.start.v);
  const int pi = nearest_node(dense.grid(), kPhi, sc.start.phi);
  ctx.write("cost_slice.csv", slice_csv(dense, vi, pi));
  ctx.log(fmt("cost map written; slice at v node %d, phi node %d", vi, pi));
}

void cmd_plan(const Context& ctx) {
  const ResolvedScenario sc = resolve_scenario(ctx.cfg);
  ValueCache cache = ctx.cache();
  const ExpertSettings& s = ctx.cfg.bench.expert;
  const CostMap cost = build_cost_map(sc.map, sc.goal, ctx.cfg.scenario.cost,
                                      ctx.cfg.scenario.disturbance, s, &cache);
  std::vector<Candidate> cands;
  PlanResult p;
  try {
    p = plan(sc.start, cost, s.planner, s.bounds, &cands);
  } catch (const PlanningFailure&) {
    ctx.write("candidates.csv", candidates_csv(cands));
    throw;
  }
  ctx.write("candidates.csv", candidates_csv(cands));
  ctx.write("trajectory.csv", trajectory_csv(p.trajectory));
  ctx.write("plan.csv", "index,x,y,theta,cost\n" +
                            fmt("%zu,%.6f,%.6f,%.6f,%.9g\n", p.index, p.waypoint.x,
                                p.waypoint.y, p.waypoint.theta, p.cost));
  ctx.log(fmt("chosen waypoint %zu: (%.3f, %.3f, %.3f), cost %.4f", p.index,
              p.waypoint.x, p.waypoint.y, p.waypoint.theta, p.cost));
}

EpisodeConfig episode_for(const AppConfig& c, const ResolvedScenario& sc,
                          CostKind kind, bool disturbance) {
  EpisodeConfig e;
  e.start = sc.start;
  e.goal = sc.goal;
  e.replan_hz = c.bench.replan_hz;
  e.timeout = c.bench.timeout;
  e.cost_kind = kind;
  e.disturbance = disturbance;
  e.noise_xy = c.bench.noise_xy;
  e.noise_theta = c.bench.noise_theta;
  e.seed = episode_seed(c.bench.seed, 0);
  return e;
}

std::string waypoints_csv(const EpisodeResult& r) {
  std::string out = "step,x,y,v,phi,omega,planned_x,planned_y,planned_theta,"
                    "executed_x,executed_y,executed_theta\n";
  for (const auto& w : r.waypoints)
    out += fmt("%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
               w.step, w.state.x, w.state.y, w.state.v, w.state.phi, w.omega,
               w.planned.x, w.planned.y, w.planned.theta, w.executed.x,
               w.executed.y, w.executed.theta);
  return out;
}

void cmd_run(const Context& ctx) {
  const ResolvedScenario sc = resolve_scenario(ctx.cfg);
  ValueCache cache = ctx.cache();
  const EpisodeResult r = run_episode(
      sc.map,
      episode_for(ctx.cfg, sc, ctx.cfg.scenario.cost, ctx.cfg.scenario.disturbance),
      ctx.cfg.bench.expert, &cache);
  ctx.write("trace.csv", trace_csv(r));
  ctx.write("waypoints.csv", waypoints_csv(r));
  ctx.write("episode.csv", "outcome,time,d_min,replans\n" +
                               fmt("%s,%.4f,%.6f,%zu\n", outcome_name(r.outcome),
                                   r.time, r.d_min, r.waypoints.size()));
  ctx.log(fmt("%s after %.2f s, d_min %.3f m", outcome_name(r.outcome), r.time, r.d_min));
  if (!r.note.empty()) ctx.log("  " + r.note);
}

std::string episodes_csv(const std::vector<MethodRun>& runs) {
  std::string out = "method,frequency_hz,task,outcome,time,d_min,difficulty\n";
  for (const auto& run : runs)
    for (std::size_t t = 0; t < run.episodes.size(); ++t) {
      const auto& e = run.episodes[t];
      out += fmt("%s,%.4g,%zu,%s,%.4f,%.6f,%s\n", run.method.name.c_str(),
                 run.replan_hz, t, outcome_name(e.outcome), e.time, e.d_min,
                 difficulty_name(classify_difficulty(e.d_min)));
    }
  return out;
}

void cmd_bench(const Context& ctx) {
  const auto tasks = make_suite(ctx.cfg.bench.suite);
  ctx.log(fmt("bench: %zu tasks x %zu methods on %d worker(s)", tasks.size(),
              ctx.cfg.bench.methods.size(), ctx.cfg.bench.workers));
  ValueCache cache = ctx.cache();
  const auto runs = run_bench(ctx.cfg.bench, tasks, &cache);
  io::write_text(ctx.out / "metrics.csv", metrics_csv(runs, ctx.provenance));
  ctx.write("episodes.csv", episodes_csv(runs));
  const std::string table = metrics_table(runs);
  io::write_text(ctx.out / "metrics.txt", table);
  if (!ctx.quiet) std::cout << table;
}

void cmd_sweep(const Context& ctx) {
  const auto tasks = make_suite(ctx.cfg.bench.suite);
  ctx.log(fmt("sweep: %zu frequencies x 2 costs x %zu tasks",
              ctx.cfg.sweep_frequencies.size(), tasks.size()));
  ValueCache cache = ctx.cache();
  const auto runs =
      sweep_replan_frequency(ctx.cfg.bench, tasks, ctx.cfg.sweep_frequencies, &cache);
  io::write_text(ctx.out / "sweep.csv", metrics_csv(runs, ctx.provenance));
  const std::string table = metrics_table(runs);
  io::write_text(ctx.out / "sweep.txt", table);
  if (!ctx.quiet) std::cout << table;
}

void cmd_dataset(const Context& ctx) {
  const auto tasks = make_suite(ctx.cfg.bench.suite);
  ValueCache cache = ctx.cache();
  const DatasetStats st =
      generate_dataset(tasks, ctx.cfg.dataset, ctx.out / "dataset.rnds", &cache);
  for (std::size_t t : st.failed_tasks)
    ctx.log(fmt("task %zu failed; no records written", t));
  ctx.write("dataset_summary.csv", "episodes,failed,records\n" +
                                       fmt("%zu,%zu,%zu\n", st.episodes, st.failed,
                                           st.records));
  ctx.log(fmt("%zu records from %zu episodes (%zu failed)", st.records,
              st.episodes, st.failed));
}

void cmd_export(const Context& ctx) {
  const ResolvedScenario sc = resolve_scenario(ctx.cfg);
  ValueCache cache = ctx.cache();
  const ExpertSettings& s = ctx.cfg.bench.expert;
  const struct {
    const char* label;
    const char* color;
    CostKind kind;
    bool dist;
  } runs[] = {{"reachability_disturbance", "#1f77b4", CostKind::kReachability, true},
              {"reachability_no_disturbance", "#d62728", CostKind::kReachability, false},
              {"heuristic", "#2ca02c", CostKind::kHeuristic, false}};
  std::vector<Polyline> lines;
  std::string summary = "label,outcome,time,d_min\n";
  for (const auto& r : runs) {
    const EpisodeResult e =
        run_episode(sc.map, episode_for(ctx.cfg, sc, r.kind, r.dist), s, &cache);
    lines.push_back({r.label, r.color, e.states});
    summary += fmt("%s,%s,%.4f,%.6f\n", r.label, outcome_name(e.outcome), e.time, e.d_min);
  }
  ctx.write("overlay.csv", overlay_csv(lines, s.sim_dt));
  ctx.write("overlay_summary.csv", summary);
  io::write_text(ctx.out / "overlay.svg",
                 "<!-- " + ctx.provenance + " -->\n" + overlay_svg(sc.map, sc.goal, lines));
  std::string cells = "i,j,x,y\n";
  for (int j = 0; j < sc.map.height(); ++j)
    for (int i = 0; i < sc.map.width(); ++i)
      if (sc.map.occupied(i, j))
        cells += fmt("%d,%d,%.4f,%.4f\n", i, j, sc.map.center_x(i), sc.map.center_y(j));
  ctx.write("map_cells.csv", cells);
  ctx.log("overlay written to " + (ctx.out / "overlay.svg").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reachnav: reachability-based navigation expert"};
  app.require_subcommand(1, 1);
  Common common;
  struct Entry {
    const char* name;
    const char* help;
    void (*fn)(const Context&);
  };
  const Entry entries[] = {
      {"solve", "solve TTR and TTC value fields for the scenario", cmd_solve},
      {"cost", "build the scenario's planner cost map", cmd_cost},
      {"plan", "single-shot plan from the scenario start", cmd_plan},
      {"run", "run one episode on the scenario", cmd_run},
      {"bench", "run the task suite for every method and write metrics", cmd_bench},
      {"dataset", "generate the supervision dataset from expert episodes", cmd_dataset},
      {"sweep", "replan-frequency sweep for both cost maps", cmd_sweep},
      {"export", "trajectory overlays (CSV and SVG) for the scenario", cmd_export},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", common.config, "scenario config (JSON)")->required();
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "override suite and episode seeds");
    sub->add_option("--workers", common.workers, "episode worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", common.quiet, "suppress progress messages");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  try {
    for (const Entry& e : entries)
      if (app.got_subcommand(e.name)) e.fn(make_context(common, e.name));
    return 0;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
