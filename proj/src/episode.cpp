#include "reachnav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "reachnav/distance.hpp"
#include "reachnav/hash.hpp"
#include "reachnav/occupancy_map.hpp"

namespace reachnav {

void ExpertSettings::validate() const {
  bounds.validate();
  planner.validate();
  lqr.validate();
  solve.validate();
  if (std::abs(sim_dt - planner.dt) > 1e-12)
    throw ValidationError("simulation dt must equal the planner dt");
  if (std::abs(solve.ttc_cap - cost.ttc_cap) > 1e-12)
    throw ValidationError("solver and cost TTC caps differ");
  if (v_count < 2 || phi_count < 2)
    throw ValidationError("v and phi grids need at least 2 nodes");
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "SUCCESS";
    case Outcome::kCollision: return "COLLISION";
    case Outcome::kTimeout: return "TIMEOUT";
    case Outcome::kPlanFailure: return "PLAN_FAILURE";
  }
  return "?";
}

void EpisodeConfig::validate() const {
  goal.validate();
  if (!(replan_hz > 0.0)) throw ValidationError("replan frequency must be > 0");
  if (!(timeout > 0.0)) throw ValidationError("timeout must be > 0");
  if (noise_xy < 0.0 || noise_theta < 0.0)
    throw ValidationError("noise sigma must be >= 0");
}

namespace {

std::uint64_t field_key(const OccupancyMap& map, const GoalSpec* goal,
                        const DynamicsBounds& b, const ExpertSettings& s) {
  Fnv1a h;
  // Bump when the solver's discretization changes so disk caches go stale.
  h.add(std::string_view("scheme-2"));
  h.add(std::string_view(goal ? "ttr" : "ttc"));
  h.add(encode_map(map));
  if (goal) h.add(goal->x).add(goal->y).add(goal->radius);
  h.add(b.v_max).add(b.a_max).add(b.w_max).add(b.d_xy).add(b.d_phi);
  h.add(s.v_count).add(s.phi_count);
  h.add(s.solve.tolerance).add(s.solve.max_cycles).add(s.solve.ttc_cap);
  h.add(s.solve.unreachable);
  if (goal) h.add(s.solve.wall_penalty);
  if (s.solve.dissipation)
    for (double d : *s.solve.dissipation) h.add(d);
  return h.value();
}

}  // namespace

CostMap build_cost_map(const OccupancyMap& map, const GoalSpec& goal,
                       CostKind kind, bool disturbance,
                       const ExpertSettings& s, ValueCache* cache) {
  s.validate();
  const DynamicsBounds b =
      disturbance ? s.bounds : s.bounds.without_disturbance();
  const Grid4D grid = grid_for_map(map, b, s.v_count, s.phi_count);
  if (kind == CostKind::kHeuristic)
    return heuristic_cost(obstacle_distance(map), goal_distance(map, goal),
                          s.cost.lambda1, s.cost.lambda2, grid);

  auto ttr_solve = [&] { return solve_ttr(grid, b, goal, map, s.solve); };
  auto ttc_solve = [&] { return solve_ttc(grid, b, map, s.solve); };
  if (!cache)
    return reachability_cost(ttr_solve(), ttc_solve(), s.cost.alpha,
                             s.cost.ttc_cap);
  const auto ttr = cache->get(field_key(map, &goal, b, s), ttr_solve);
  const auto ttc = cache->get(field_key(map, nullptr, b, s), ttc_solve);
  return reachability_cost(*ttr, *ttc, s.cost.alpha, s.cost.ttc_cap);
}

EpisodeResult run_episode(const OccupancyMap& map, const CostMap& cost,
                          const EpisodeConfig& cfg, const ExpertSettings& s) {
  s.validate();
  cfg.validate();
  const VehicleState& z0 = cfg.start;
  if (z0.v < 0.0 || z0.v > s.bounds.v_max)
    throw ValidationError("start speed outside [0, v_max]");
  if (map.occupied_at(z0.x, z0.y))
    throw ValidationError("start position is occupied");

  EpisodeResult r;
  r.dt = s.sim_dt;
  VehicleState z = z0;
  z.phi = wrap_angle(z.phi);
  r.states.push_back(z);
  r.d_min = map.clearance(z.x, z.y, 1.0);
  if (cfg.goal.contains(z.x, z.y)) {
    r.outcome = Outcome::kSuccess;
    return r;
  }

  std::mt19937_64 eng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto truncated = [&](double sigma) {
    if (sigma <= 0.0) return 0.0;
    double g;
    do g = gauss(eng);
    while (std::abs(g) > 3.0);
    return sigma * g;
  };
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  const int per_replan =
      std::max(1, static_cast<int>(std::lround(1.0 / (cfg.replan_hz * s.sim_dt))));
  std::size_t k_total = 0;
  double omega_last = 0.0;
  const auto max_steps =
      static_cast<std::size_t>(std::ceil(cfg.timeout / s.sim_dt - 1e-9));

  while (true) {
    PlanResult p;
    try {
      p = plan(z, cost, s.planner, s.bounds);
    } catch (const PlanningFailure& e) {
      r.outcome = Outcome::kPlanFailure;
      r.note = e.what();
      return r;
    }
    WaypointRecord rec{k_total, z, omega_last, p.waypoint, p.waypoint};
    SplineTrajectory ref = std::move(p.trajectory);
    if (cfg.noise_xy > 0.0 || cfg.noise_theta > 0.0) {
      Waypoint w = p.waypoint;
      w.x += truncated(cfg.noise_xy);
      w.y += truncated(cfg.noise_xy);
      w.theta = wrap_angle(w.theta + truncated(cfg.noise_theta));
      try {
        ref = fit_spline(z, w, s.planner.horizon, s.planner.dt,
                         terminal_speed(z, w, s.planner.horizon,
                                        s.planner.terminal_rule, s.bounds),
                         s.planner.start_speed_floor);
        rec.executed = w;
      } catch (const ValidationError&) {
        // Noise collapsed the segment; keep the clean reference.
      }
    }
    r.waypoints.push_back(rec);
    const LqrGains gains = solve_lqr(ref, s.lqr);
    const std::size_t n =
        std::min<std::size_t>(static_cast<std::size_t>(per_replan), ref.steps());
    for (std::size_t k = 0; k < n; ++k) {
      const ControlInput u = track_step(z, ref, gains, k, s.bounds);
      Disturbance d;
      if (s.rollout_disturbance) {
        double dx = unit(eng), dy = unit(eng);
        const double norm = std::hypot(dx, dy);
        if (norm > 1.0) dx /= norm, dy /= norm;
        d = {s.bounds.d_xy * dx, s.bounds.d_xy * dy, s.bounds.d_phi * unit(eng)};
      }
      z = step(z, u, d, s.sim_dt, s.bounds);
      r.controls.push_back(u);
      r.states.push_back(z);
      omega_last = u.omega;
      ++k_total;
      r.time = static_cast<double>(k_total) * s.sim_dt;
      if (map.occupied_at(z.x, z.y)) {
        r.d_min = 0.0;
        r.outcome = Outcome::kCollision;
        return r;
      }
      r.d_min = std::min(r.d_min, map.clearance(z.x, z.y, 1.0));
      if (cfg.goal.contains(z.x, z.y)) {
        r.outcome = Outcome::kSuccess;
        return r;
      }
      if (k_total >= max_steps) {
        r.outcome = Outcome::kTimeout;
        return r;
      }
    }
  }
}

EpisodeResult run_episode(const OccupancyMap& map, const EpisodeConfig& cfg,
                          const ExpertSettings& s, ValueCache* cache) {
  CostMap cost;
  try {
    cost = build_cost_map(map, cfg.goal, cfg.cost_kind, cfg.disturbance, s, cache);
  } catch (const InfeasibleError& e) {
    EpisodeResult r;
    r.dt = s.sim_dt;
    r.states.push_back(cfg.start);
    r.d_min = map.clearance(cfg.start.x, cfg.start.y, 1.0);
    r.outcome = Outcome::kPlanFailure;
    r.note = e.what();
    return r;
  }
  return run_episode(map, cost, cfg, s);
}

}  // namespace reachnav
