#include "reachnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reachnav {

void PlannerConfig::validate() const {
  if (!(forward.lo > 0.0) || forward.hi < forward.lo)
    throw ValidationError("planner forward range must be positive");
  if (lateral.hi < lateral.lo || heading.hi < heading.lo)
    throw ValidationError("planner ranges must be ordered");
  if (forward.count < 1 || lateral.count < 1 || heading.count < 1)
    throw ValidationError("planner grid counts must be >= 1");
  if (!(start_speed_floor >= 0.0))
    throw ValidationError("start speed floor must be >= 0");
  if (!(horizon > 0.0) || !(dt > 0.0) || dt > horizon)
    throw ValidationError("planner horizon and dt must satisfy 0 < dt <= H");
  const double n = horizon / dt;
  if (std::abs(n - std::round(n)) > 1e-9)
    throw ValidationError("planner horizon must be a multiple of dt");
}

int PlannerConfig::steps() const {
  return static_cast<int>(std::lround(horizon / dt));
}

Waypoint to_world(const VehicleState& pose, const Waypoint& ego) {
  const double c = std::cos(pose.phi), s = std::sin(pose.phi);
  return {pose.x + c * ego.x - s * ego.y, pose.y + s * ego.x + c * ego.y,
          wrap_angle(pose.phi + ego.theta), Frame::kWorld};
}

Waypoint to_egocentric(const VehicleState& pose, const Waypoint& world) {
  const double c = std::cos(pose.phi), s = std::sin(pose.phi);
  const double dx = world.x - pose.x, dy = world.y - pose.y;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(world.theta - pose.phi),
          Frame::kEgocentric};
}

std::vector<Waypoint> sample_waypoint_grid(const VehicleState& state,
                                           const PlannerConfig& cfg) {
  std::vector<Waypoint> out;
  out.reserve(static_cast<std::size_t>(cfg.forward.count) *
              cfg.lateral.count * cfg.heading.count);
  for (int f = 0; f < cfg.forward.count; ++f)
    for (int l = 0; l < cfg.lateral.count; ++l)
      for (int h = 0; h < cfg.heading.count; ++h)
        out.push_back(to_world(state, {cfg.forward.value(f),
                                       cfg.lateral.value(l),
                                       cfg.heading.value(h), Frame::kEgocentric}));
  return out;
}

double terminal_speed(const VehicleState& start, const Waypoint& wp,
                      double horizon, TerminalSpeedRule rule,
                      const DynamicsBounds& b) {
  const double lo = 0.1 * b.v_max, hi = b.v_max;
  if (rule == TerminalSpeedRule::kStartSpeedClamped)
    return std::clamp(start.v, lo, hi);
  const double chord = std::hypot(wp.x - start.x, wp.y - start.y);
  return std::clamp(2.0 * chord / horizon - start.v, lo, hi);
}

SplineTrajectory fit_spline(const VehicleState& start, const Waypoint& wp,
                            double horizon, double dt, double end_speed,
                            double start_speed_floor) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw ValidationError("fit_spline: horizon and dt must be positive");
  if (!(end_speed > 0.0))
    throw ValidationError("fit_spline: terminal speed must be positive");
  const double dx = wp.x - start.x, dy = wp.y - start.y;
  if (std::hypot(dx, dy) < 1e-9)
    throw ValidationError("fit_spline: zero-length trajectory");

  const double v0 = std::max({start.v, start_speed_floor, kMinStartSpeed});
  const double m0x = horizon * v0 * std::cos(start.phi);
  const double m0y = horizon * v0 * std::sin(start.phi);
  const double m1x = horizon * end_speed * std::cos(wp.theta);
  const double m1y = horizon * end_speed * std::sin(wp.theta);

  SplineTrajectory t;
  t.horizon = horizon;
  t.dt = dt;
  t.cx = {start.x, m0x, 3.0 * dx - 2.0 * m0x - m1x, -2.0 * dx + m0x + m1x};
  t.cy = {start.y, m0y, 3.0 * dy - 2.0 * m0y - m1y, -2.0 * dy + m0y + m1y};

  const int n = static_cast<int>(std::lround(horizon / dt));
  t.states.reserve(n + 1);
  t.controls.reserve(n + 1);
  const auto& cx = t.cx;
  const auto& cy = t.cy;
  double pxd = 0.0, pyd = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double x = cx[0] + s * (cx[1] + s * (cx[2] + s * cx[3]));
    const double y = cy[0] + s * (cy[1] + s * (cy[2] + s * cy[3]));
    const double xd = (cx[1] + s * (2.0 * cx[2] + 3.0 * s * cx[3])) / horizon;
    const double yd = (cy[1] + s * (2.0 * cy[2] + 3.0 * s * cy[3])) / horizon;
    const double xdd = (2.0 * cx[2] + 6.0 * s * cx[3]) / (horizon * horizon);
    const double ydd = (2.0 * cy[2] + 6.0 * s * cy[3]) / (horizon * horizon);
    const double v = std::hypot(xd, yd);
    double phi, a, w;
    if (v > 1e-12) {
      phi = std::atan2(yd, xd);
      a = (xd * xdd + yd * ydd) / v;
      w = (xd * ydd - yd * xdd) / (v * v);
    } else {
      // Cusp: keep the previous heading; report an infinite turn rate so the
      // candidate is rejected.
      phi = t.states.empty() ? start.phi : t.states.back().phi;
      a = 0.0;
      w = std::numeric_limits<double>::infinity();
    }
    // A velocity reversal between samples hides a cusp the samples miss.
    if (i > 0 && xd * pxd + yd * pyd < 0.0)
      w = std::numeric_limits<double>::infinity();
    pxd = xd;
    pyd = yd;
    t.states.push_back({x, y, v, wrap_angle(phi)});
    t.controls.push_back({a, w});
  }
  // Pin the boundary poses exactly.
  t.states.front().x = start.x;
  t.states.front().y = start.y;
  t.states.front().phi = wrap_angle(start.phi);
  t.states.back().x = wp.x;
  t.states.back().y = wp.y;
  t.states.back().phi = wrap_angle(wp.theta);
  return t;
}

bool check_feasibility(const SplineTrajectory& traj, const DynamicsBounds& b) {
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double v = traj.states[i].v;
    const ControlInput& u = traj.controls[i];
    if (!(v >= 0.0 && v <= b.v_max)) return false;
    if (!(std::abs(u.omega) <= b.w_max)) return false;
    if (!(std::abs(u.a) <= b.a_max)) return false;
  }
  return true;
}

PlanResult plan(const VehicleState& state, const CostMap& cost,
                const PlannerConfig& cfg, const DynamicsBounds& b,
                std::vector<Candidate>* candidates) {
  cfg.validate();
  const std::vector<Waypoint> wps = sample_waypoint_grid(state, cfg);
  if (wps.empty()) throw PlanningFailure("empty waypoint grid");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> costs(wps.size(), inf);
  std::vector<std::uint8_t> feasible(wps.size(), 0);
  const long long n = static_cast<long long>(wps.size());

#pragma omp parallel for schedule(dynamic, 16) if (cfg.parallel)
  for (long long k = 0; k < n; ++k) {
    SplineTrajectory traj;
    try {
      const double vt =
          terminal_speed(state, wps[k], cfg.horizon, cfg.terminal_rule, b);
      traj = fit_spline(state, wps[k], cfg.horizon, cfg.dt, vt,
                        cfg.start_speed_floor);
    } catch (const ValidationError&) {
      continue;
    }
    if (!check_feasibility(traj, b)) continue;
    feasible[k] = 1;
    double sum = 0.0;
    try {
      for (const VehicleState& z : traj.states) {
        const double j = cost.interpolate(z);
        if (j >= cost.unreachable()) {
          sum = inf;
          break;
        }
        sum += j;
      }
    } catch (const DomainError&) {
      sum = inf;
    }
    costs[k] = sum;
  }

  if (candidates) {
    candidates->clear();
    for (std::size_t k = 0; k < wps.size(); ++k)
      candidates->push_back({wps[k], feasible[k] != 0, costs[k]});
  }
  std::size_t best = wps.size();
  for (std::size_t k = 0; k < wps.size(); ++k)
    if (costs[k] < inf && (best == wps.size() || costs[k] < costs[best]))
      best = k;
  if (best == wps.size())
    throw PlanningFailure("no feasible candidate with finite cost");

  PlanResult r;
  r.waypoint = wps[best];
  r.trajectory = fit_spline(
      state, wps[best], cfg.horizon, cfg.dt,
      terminal_speed(state, wps[best], cfg.horizon, cfg.terminal_rule, b),
      cfg.start_speed_floor);
  r.cost = costs[best];
  r.index = best;
  return r;
}

}  // namespace reachnav
