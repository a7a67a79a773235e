#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reachnav/episode.hpp"
#include "reachnav/map_gen.hpp"
#include "reachnav/metrics.hpp"

namespace reachnav {

struct Task {
  std::size_t index = 0;
  std::uint64_t map_seed = 0;
  OccupancyMap map;
  VehicleState start;
  GoalSpec goal;
};

// maps x starts_per_map tasks. One goal per map (so value fields are shared
// by its tasks); starts and goal need min_clearance to the nearest obstacle.
// Doorway maps put starts left of the wall and the goal right of it, with the
// start heading aimed near the gap.
struct SuiteConfig {
  MapKind kind = MapKind::kDoorway;
  MapGenParams map;
  int maps = 10;
  int starts_per_map = 5;
  std::uint64_t seed = 1;
  double goal_radius = 0.3;
  double min_clearance = 0.3;

  void validate() const;
};

std::vector<Task> make_suite(const SuiteConfig& cfg);

struct Method {
  std::string name;
  CostKind kind = CostKind::kReachability;
  bool disturbance = true;
};

// reach_dist, reach_nodist, heuristic.
std::vector<Method> default_methods();

struct BenchConfig {
  SuiteConfig suite;
  ExpertSettings expert;
  std::vector<Method> methods = default_methods();
  double replan_hz = 4.0;
  double timeout = 60.0;
  double noise_xy = 0.1;
  double noise_theta = 0.1;
  std::uint64_t seed = 1;  // episode noise seeds derive from (seed, task)
  int workers = 1;

  void validate() const;
};

struct MethodRun {
  Method method;
  double replan_hz = 0.0;
  std::vector<EpisodeResult> episodes;  // by task index
  Metrics metrics;
};

std::uint64_t episode_seed(std::uint64_t base, std::size_t task);

// Runs every method on every task; episodes are distributed over `workers`
// threads and returned in task order.
std::vector<MethodRun> run_bench(const BenchConfig& cfg,
                                 const std::vector<Task>& tasks,
                                 ValueCache* cache);

// Every frequency with the disturbance-on reachability cost and the
// heuristic cost: |frequencies| x 2 rows.
std::vector<MethodRun> sweep_replan_frequency(
    const BenchConfig& cfg, const std::vector<Task>& tasks,
    const std::vector<double>& frequencies, ValueCache* cache);

extern const char* const kMetricsCsvHeader;
// One row per run, preceded by a '#' provenance line.
std::string metrics_csv(const std::vector<MethodRun>& runs,
                        const std::string& provenance);
std::string metrics_table(const std::vector<MethodRun>& runs);

}  // namespace reachnav
