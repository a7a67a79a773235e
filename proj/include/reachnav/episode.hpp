#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reachnav/cost.hpp"
#include "reachnav/dynamics.hpp"
#include "reachnav/hj_solver.hpp"
#include "reachnav/occupancy_map.hpp"
#include "reachnav/planner.hpp"
#include "reachnav/tracker.hpp"
#include "reachnav/value_cache.hpp"

namespace reachnav {

// Everything about the expert that is shared across episodes.
struct ExpertSettings {
  DynamicsBounds bounds;
  PlannerConfig planner;
  LqrWeights lqr;
  SolveConfig solve;
  CostParams cost;
  int v_count = 7;
  int phi_count = 24;
  double sim_dt = 0.05;  // s, must equal planner.dt
  // Apply uniformly random disturbances within the bounds during rollouts.
  // Off by default: noise enters through the waypoints only.
  bool rollout_disturbance = false;

  void validate() const;
};

enum class Outcome { kSuccess, kCollision, kTimeout, kPlanFailure };
const char* outcome_name(Outcome o);

struct EpisodeConfig {
  VehicleState start;
  GoalSpec goal;
  double replan_hz = 4.0;
  double timeout = 60.0;  // s, simulated
  CostKind cost_kind = CostKind::kReachability;
  bool disturbance = true;  // disturbance bounds used for the value fields
  double noise_xy = 0.0;    // m, waypoint noise sigma (truncated at 3 sigma)
  double noise_theta = 0.0; // rad
  std::uint64_t seed = 0;

  void validate() const;
};

struct WaypointRecord {
  std::size_t step = 0;   // trace index at which the plan was made
  VehicleState state;     // robot state at planning time
  double omega = 0.0;     // last applied turn rate
  Waypoint planned;       // planner output, world frame
  Waypoint executed;      // after noise, world frame
};

struct EpisodeResult {
  Outcome outcome = Outcome::kTimeout;
  double time = 0.0;
  double dt = 0.05;
  std::vector<VehicleState> states;     // states[0] is the start
  std::vector<ControlInput> controls;   // controls[k] drives states[k] -> [k+1]
  double d_min = 0.0;
  std::vector<WaypointRecord> waypoints;
  std::string note;  // diagnostic for PLAN_FAILURE
};

// Cost map for (map, goal); value fields go through the cache when given.
CostMap build_cost_map(const OccupancyMap& map, const GoalSpec& goal,
                       CostKind kind, bool disturbance,
                       const ExpertSettings& s, ValueCache* cache = nullptr);

// Receding-horizon loop against a prepared cost map.
EpisodeResult run_episode(const OccupancyMap& map, const CostMap& cost,
                          const EpisodeConfig& cfg, const ExpertSettings& s);

// Builds the configured cost map first; solver infeasibility becomes a
// PLAN_FAILURE result.
EpisodeResult run_episode(const OccupancyMap& map, const EpisodeConfig& cfg,
                          const ExpertSettings& s, ValueCache* cache = nullptr);

}  // namespace reachnav
