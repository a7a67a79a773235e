#include "reachnav/suite.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <omp.h>

#include "reachnav/hash.hpp"
#include "reachnav/rng.hpp"

namespace reachnav {

void SuiteConfig::validate() const {
  map.validate();
  if (maps < 1 || starts_per_map < 1)
    throw ValidationError("suite needs at least one map and one start");
  if (!(goal_radius > 0.0)) throw ValidationError("goal radius must be > 0");
  if (min_clearance < 0.0) throw ValidationError("min clearance must be >= 0");
}

namespace {

bool clear_ray(const OccupancyMap& m, double x, double y, double phi,
               double length, double clearance) {
  for (double s = 0.0; s <= length; s += 0.5 * m.cell_size())
    if (m.clearance(x + s * std::cos(phi), y + s * std::sin(phi), clearance) <
        clearance)
      return false;
  return true;
}

}  // namespace

std::vector<Task> make_suite(const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<Task> tasks;
  const double ex = cfg.map.width * cfg.map.cell_size;
  const double ey = cfg.map.height * cfg.map.cell_size;
  for (int k = 0; k < cfg.maps; ++k) {
    const std::uint64_t map_seed = Fnv1a().add(cfg.seed).add(k).value();
    const OccupancyMap map = generate_map(cfg.kind, cfg.map, map_seed);
    Rng rng(map_seed ^ 0x9e3779b97f4a7c15ull);
    double sx_lo = 0.0, sx_hi = ex, gx_lo = 0.0, gx_hi = ex;
    double aim_x = 0.5 * ex, aim_y = 0.5 * ey;
    if (cfg.kind == MapKind::kDoorway) {
      const DoorwayLayout l = doorway_layout(cfg.map, map_seed);
      sx_hi = l.wall_i0 * cfg.map.cell_size;
      gx_lo = (l.wall_i1 + 1) * cfg.map.cell_size;
      aim_x = 0.5 * (sx_hi + gx_lo);
      aim_y = 0.5 * (l.gap_j0 + l.gap_j1 + 1) * cfg.map.cell_size;
    }
    auto draw = [&](double xlo, double xhi, double& x, double& y) {
      for (int t = 0; t < 10000; ++t) {
        x = rng.uniform(xlo, xhi);
        y = rng.uniform(0.0, ey);
        if (!map.occupied_at(x, y) &&
            map.clearance(x, y, cfg.min_clearance) >= cfg.min_clearance)
          return;
      }
      throw ValidationError("suite: no free position with the requested clearance");
    };
    GoalSpec goal;
    goal.radius = cfg.goal_radius;
    draw(gx_lo, gx_hi, goal.x, goal.y);
    for (int s = 0; s < cfg.starts_per_map; ++s) {
      Task t;
      t.index = tasks.size();
      t.map_seed = map_seed;
      t.map = map;
      t.goal = goal;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000)
          throw ValidationError("suite: could not place a start state");
        draw(sx_lo, sx_hi, t.start.x, t.start.y);
        if (goal.contains(t.start.x, t.start.y)) continue;
        const double aim = cfg.kind == MapKind::kDoorway
                               ? std::atan2(aim_y - t.start.y, aim_x - t.start.x)
                               : std::atan2(goal.y - t.start.y, goal.x - t.start.x);
        t.start.phi = wrap_angle(aim + rng.uniform(-0.5, 0.5));
        t.start.v = 0.0;
        if (clear_ray(map, t.start.x, t.start.y, t.start.phi, 0.5,
                      0.5 * cfg.min_clearance))
          break;
      }
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

std::vector<Method> default_methods() {
  return {{"reach_dist", CostKind::kReachability, true},
          {"reach_nodist", CostKind::kReachability, false},
          {"heuristic", CostKind::kHeuristic, false}};
}

void BenchConfig::validate() const {
  suite.validate();
  expert.validate();
  if (methods.empty()) throw ValidationError("bench needs at least one method");
  if (!(replan_hz > 0.0)) throw ValidationError("replan frequency must be > 0");
  if (!(timeout > 0.0)) throw ValidationError("timeout must be > 0");
  if (noise_xy < 0.0 || noise_theta < 0.0)
    throw ValidationError("noise sigma must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

std::uint64_t episode_seed(std::uint64_t base, std::size_t task) {
  return Fnv1a().add(base).add(static_cast<std::uint64_t>(task)).value();
}

namespace {

std::vector<MethodRun> run_grid(const BenchConfig& cfg,
                                const std::vector<Task>& tasks,
                                const std::vector<std::pair<Method, double>>& rows,
                                ValueCache* cache) {
  cfg.validate();
  if (tasks.empty()) throw ValidationError("bench needs at least one task");
  std::vector<MethodRun> runs(rows.size());
  for (std::size_t m = 0; m < rows.size(); ++m) {
    runs[m].method = rows[m].first;
    runs[m].replan_hz = rows[m].second;
    runs[m].episodes.resize(tasks.size());
  }
  const long long jobs = static_cast<long long>(rows.size() * tasks.size());
  std::vector<std::exception_ptr> errors(jobs);
  // Task-major order so a map's value fields are solved once and reused.
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
  for (long long j = 0; j < jobs; ++j) {
    const std::size_t t = static_cast<std::size_t>(j) / rows.size();
    const std::size_t m = static_cast<std::size_t>(j) % rows.size();
    try {
      EpisodeConfig e;
      e.start = tasks[t].start;
      e.goal = tasks[t].goal;
      e.replan_hz = rows[m].second;
      e.timeout = cfg.timeout;
      e.cost_kind = rows[m].first.kind;
      e.disturbance = rows[m].first.disturbance;
      e.noise_xy = cfg.noise_xy;
      e.noise_theta = cfg.noise_theta;
      e.seed = episode_seed(cfg.seed, tasks[t].index);
      runs[m].episodes[t] = run_episode(tasks[t].map, e, cfg.expert, cache);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& r : runs) r.metrics = compute_metrics(r.episodes);
  return runs;
}

}  // namespace

std::vector<MethodRun> run_bench(const BenchConfig& cfg,
                                 const std::vector<Task>& tasks,
                                 ValueCache* cache) {
  std::vector<std::pair<Method, double>> rows;
  for (const auto& m : cfg.methods) rows.emplace_back(m, cfg.replan_hz);
  return run_grid(cfg, tasks, rows, cache);
}

std::vector<MethodRun> sweep_replan_frequency(
    const BenchConfig& cfg, const std::vector<Task>& tasks,
    const std::vector<double>& frequencies, ValueCache* cache) {
  if (frequencies.empty()) throw ValidationError("sweep needs frequencies");
  std::vector<std::pair<Method, double>> rows;
  for (double f : frequencies) {
    if (!(f > 0.0)) throw ValidationError("replan frequency must be > 0");
    rows.emplace_back(Method{"reachability", CostKind::kReachability, true}, f);
    rows.emplace_back(Method{"heuristic", CostKind::kHeuristic, false}, f);
  }
  return run_grid(cfg, tasks, rows, cache);
}

const char* const kMetricsCsvHeader =
    "method,frequency_hz,tasks,success_rate,time_mean,time_std,accel_mean,"
    "accel_std,jerk_mean,jerk_std,hard_count,hard_success,medium_count,"
    "medium_success,easy_count,easy_success";

std::string metrics_csv(const std::vector<MethodRun>& runs,
                        const std::string& provenance) {
  std::string out = "# " + provenance + "\n" + kMetricsCsvHeader + "\n";
  char buf[512];
  for (const auto& r : runs) {
    const Metrics& m = r.metrics;
    std::snprintf(buf, sizeof buf,
                  "%s,%.4g,%d,%.2f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%d,%.2f,%d,%.2f,%d,%.2f\n",
                  r.method.name.c_str(), r.replan_hz, m.tasks, m.success_rate,
                  m.time.mean, m.time.std, m.accel.mean, m.accel.std,
                  m.jerk.mean, m.jerk.std, m.hard.count, m.hard.success_rate,
                  m.medium.count, m.medium.success_rate, m.easy.count,
                  m.easy.success_rate);
    out += buf;
  }
  return out;
}

std::string metrics_table(const std::vector<MethodRun>& runs) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-14s %6s %6s %9s %15s %15s %15s  %s\n",
                "method", "hz", "tasks", "success%", "time (s)",
                "accel (m/s2)", "jerk (m/s3)", "hard/medium/easy success%");
  out += buf;
  for (const auto& r : runs) {
    const Metrics& m = r.metrics;
    std::snprintf(buf, sizeof buf,
                  "%-14s %6.2f %6d %9.2f %7.2f +- %-5.2f %7.3f +- %-5.3f "
                  "%7.3f +- %-5.3f  %.0f(%d)/%.0f(%d)/%.0f(%d)\n",
                  r.method.name.c_str(), r.replan_hz, m.tasks, m.success_rate,
                  m.time.mean, m.time.std, m.accel.mean, m.accel.std,
                  m.jerk.mean, m.jerk.std, m.hard.success_rate, m.hard.count,
                  m.medium.success_rate, m.medium.count, m.easy.success_rate,
                  m.easy.count);
    out += buf;
  }
  return out;
}

}  // namespace reachnav
