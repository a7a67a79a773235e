#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "reachnav/cost.hpp"
#include "reachnav/distance.hpp"
#include "reachnav/errors.hpp"
#include "reachnav/hj_solver.hpp"
#include "reachnav/planner.hpp"

using namespace reachnav;
using std::numbers::pi;

namespace {

struct OpenScene {
  OccupancyMap map = fixture::box(60, 40);
  DynamicsBounds bounds;
  GoalSpec goal{4.5, 2.0, 0.3};
  Grid4D grid = grid_for_map(map, bounds, 7, 24);
  CostMap cost = heuristic_cost(obstacle_distance(map), goal_distance(map, goal), 0.3,
                                1.0, grid);
};

double poly(const std::array<double, 4>& c, double s) {
  return c[0] + s * (c[1] + s * (c[2] + s * c[3]));
}

double dpoly(const std::array<double, 4>& c, double s) {
  return c[1] + s * (2 * c[2] + 3 * s * c[3]);
}

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("waypoint grid enumeration") {
  PlannerConfig cfg;
  cfg.forward = {2.0, 2.0, 1};
  cfg.lateral = {0.0, 0.0, 1};
  cfg.heading = {0.0, 0.0, 1};
  auto w = sample_waypoint_grid({0, 0, 0, 0}, cfg);
  REQUIRE(w.size() == 1);
  CHECK(w[0].x == doctest::Approx(2.0));
  CHECK(w[0].y == doctest::Approx(0.0));
  CHECK(w[0].theta == doctest::Approx(0.0));
  CHECK(w[0].frame == Frame::kWorld);

  w = sample_waypoint_grid({0, 0, 0, pi / 2}, cfg);
  CHECK(w[0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w[0].y == doctest::Approx(2.0));
  CHECK(w[0].theta == doctest::Approx(pi / 2));

  cfg.forward = {0.5, 1.5, 3};
  cfg.lateral = {-0.5, 0.5, 3};
  cfg.heading = {-0.5, 0.5, 3};
  w = sample_waypoint_grid({1, 2, 0.3, 0.4}, cfg);
  std::set<std::tuple<double, double, double>> distinct;
  for (const auto& p : w) distinct.insert({p.x, p.y, p.theta});
  CHECK(distinct.size() == 27);
  // Forward is the outermost loop, heading the innermost.
  const Waypoint e1 = to_egocentric({1, 2, 0.3, 0.4}, w[1]);
  CHECK(e1.x == doctest::Approx(0.5));
  CHECK(e1.y == doctest::Approx(-0.5));
  CHECK(e1.theta == doctest::Approx(0.0));
  const Waypoint e9 = to_egocentric({1, 2, 0.3, 0.4}, w[9]);
  CHECK(e9.x == doctest::Approx(1.0));
}

TEST_CASE("frame transforms are inverse") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const VehicleState pose{u(rng), u(rng), 0.2, u(rng)};
    const Waypoint w{u(rng), u(rng), u(rng), Frame::kWorld};
    const Waypoint back = to_world(pose, to_egocentric(pose, w));
    CHECK(back.x == doctest::Approx(w.x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(w.y).epsilon(1e-12));
    CHECK(std::remainder(back.theta - w.theta, 2 * pi) == doctest::Approx(0.0));
  }
}

TEST_CASE("symmetric boundary conditions give a straight constant-speed spline") {
  const SplineTrajectory t = fit_spline({0, 0, 0.6, 0}, {1.2, 0, 0, Frame::kWorld}, 2.0, 0.05, 0.6);
  CHECK(t.steps() == 40);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    CHECK(t.states[i].v == doctest::Approx(0.6));
    CHECK(t.states[i].y == doctest::Approx(0.0));
    CHECK(t.states[i].x == doctest::Approx(0.6 * 0.05 * i));
    CHECK(t.controls[i].omega == doctest::Approx(0.0));
    CHECK(t.controls[i].a == doctest::Approx(0.0));
  }
  CHECK(check_feasibility(t, DynamicsBounds{}));
}

TEST_CASE("spline hits both boundary poses") {
  const VehicleState start{0.3, -0.2, 0.25, 0.4};
  const Waypoint wp{1.0, 0.4, 0.9, Frame::kWorld};
  const SplineTrajectory t = fit_spline(start, wp, 1.5, 0.05, 0.3);
  CHECK(poly(t.cx, 0.0) == start.x);
  CHECK(poly(t.cy, 0.0) == start.y);
  CHECK(std::abs(poly(t.cx, 1.0) - wp.x) < 1e-12);
  CHECK(std::abs(poly(t.cy, 1.0) - wp.y) < 1e-12);
  CHECK(std::atan2(dpoly(t.cy, 1.0), dpoly(t.cx, 1.0)) == doctest::Approx(wp.theta));
  CHECK(std::hypot(dpoly(t.cx, 1.0), dpoly(t.cy, 1.0)) / 1.5 == doctest::Approx(0.3));
  CHECK(std::atan2(dpoly(t.cy, 0.0), dpoly(t.cx, 0.0)) == doctest::Approx(start.phi));
  CHECK(t.states.back().x == wp.x);
  CHECK(t.states.back().phi == doctest::Approx(wp.theta));
}

TEST_CASE("finite differences of the sampled path recover v, phi and omega") {
  const SplineTrajectory t =
      fit_spline({0, 0, 0.4, 0.2}, {0.8, 0.35, 0.8, Frame::kWorld}, 1.5, 0.05, 0.5);
  const double dt = t.dt;
  const auto& s = t.states;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    const double xd = (s[i - 2].x - 8 * s[i - 1].x + 8 * s[i + 1].x - s[i + 2].x) / (12 * dt);
    const double yd = (s[i - 2].y - 8 * s[i - 1].y + 8 * s[i + 1].y - s[i + 2].y) / (12 * dt);
    const double xdd = (-s[i - 2].x + 16 * s[i - 1].x - 30 * s[i].x + 16 * s[i + 1].x - s[i + 2].x) / (12 * dt * dt);
    const double ydd = (-s[i - 2].y + 16 * s[i - 1].y - 30 * s[i].y + 16 * s[i + 1].y - s[i + 2].y) / (12 * dt * dt);
    const double v = std::hypot(xd, yd);
    CHECK(std::abs(v - s[i].v) < 1e-6);
    CHECK(std::abs(std::remainder(std::atan2(yd, xd) - s[i].phi, 2 * pi)) < 1e-6);
    CHECK(std::abs((xd * ydd - yd * xdd) / (v * v) - t.controls[i].omega) < 1e-6);
    CHECK(std::abs((xd * xdd + yd * ydd) / v - t.controls[i].a) < 1e-6);
  }
}

TEST_CASE("start speed floor") {
  const SplineTrajectory t = fit_spline({0, 0, 0.0, 0}, {0.5, 0, 0, Frame::kWorld}, 1.5, 0.05, 0.2);
  CHECK(t.states.front().v == doctest::Approx(kMinStartSpeed));
  const SplineTrajectory f =
      fit_spline({0, 0, 0.0, 0}, {0.5, 0, 0, Frame::kWorld}, 1.5, 0.05, 0.2, 0.06);
  CHECK(f.states.front().v == doctest::Approx(0.06));
}

TEST_CASE("fit_spline input validation") {
  CHECK_THROWS_AS(fit_spline({1, 1, 0.2, 0}, {1, 1, 0.5, Frame::kWorld}, 1.5, 0.05, 0.3),
                  ValidationError);
  CHECK_THROWS_AS(fit_spline({0, 0, 0.2, 0}, {1, 1, 0, Frame::kWorld}, 0.0, 0.05, 0.3),
                  ValidationError);
  CHECK_THROWS_AS(fit_spline({0, 0, 0.2, 0}, {1, 1, 0, Frame::kWorld}, 1.5, 0.05, 0.0),
                  ValidationError);
}

TEST_CASE("feasibility is strict") {
  const DynamicsBounds b;
  SUBCASE("waypoint behind with opposite heading") {
    const SplineTrajectory t =
        fit_spline({0, 0, 0.3, 0}, {-0.3, 0.1, pi, Frame::kWorld}, 1.5, 0.05, 0.3);
    double wmax = 0.0;
    for (const auto& u : t.controls) wmax = std::max(wmax, std::abs(u.omega));
    CHECK(wmax > b.w_max);
    CHECK_FALSE(check_feasibility(t, b));
  }
  SUBCASE("speed one nanometer per second over the bound") {
    SplineTrajectory t = fit_spline({0, 0, 0.6, 0}, {0.9, 0, 0, Frame::kWorld}, 1.5, 0.05, 0.6);
    for (auto& s : t.states) s.v = b.v_max;
    CHECK(check_feasibility(t, b));
    t.states[7].v = b.v_max + 1e-9;
    CHECK_FALSE(check_feasibility(t, b));
  }
  SUBCASE("reversal along a line is a cusp") {
    const SplineTrajectory t =
        fit_spline({0, 0, 0.3, 0}, {-0.3, 0.0, pi, Frame::kWorld}, 1.5, 0.05, 0.3);
    bool cusp = false;
    for (const auto& u : t.controls) cusp = cusp || std::isinf(u.omega);
    CHECK(cusp);
    CHECK_FALSE(check_feasibility(t, b));
  }
  SUBCASE("non-finite turn rate") {
    SplineTrajectory t = fit_spline({0, 0, 0.3, 0}, {0.45, 0, 0, Frame::kWorld}, 1.5, 0.05, 0.3);
    t.controls[3].omega = std::numeric_limits<double>::infinity();
    CHECK_FALSE(check_feasibility(t, b));
  }
}

TEST_CASE("terminal speed rules") {
  const DynamicsBounds b;
  const Waypoint wp{0.6, 0.0, 0.0, Frame::kWorld};
  CHECK(terminal_speed({0, 0, 0.0, 0}, wp, 1.5, TerminalSpeedRule::kStartSpeedClamped, b) ==
        doctest::Approx(0.06));
  CHECK(terminal_speed({0, 0, 0.3, 0}, wp, 1.5, TerminalSpeedRule::kStartSpeedClamped, b) ==
        doctest::Approx(0.3));
  CHECK(terminal_speed({0, 0, 0.3, 0}, wp, 1.5, TerminalSpeedRule::kKinematic, b) ==
        doctest::Approx(0.5));
  CHECK(terminal_speed({0, 0, 0.0, 0}, {2.0, 0, 0, Frame::kWorld}, 1.5,
                       TerminalSpeedRule::kKinematic, b) == doctest::Approx(0.6));
}

TEST_CASE("plan returns the exhaustive argmin") {
  const OpenScene sc;
  for (const VehicleState start : {VehicleState{1.0, 2.0, 0.3, 0.0}, VehicleState{2.0, 1.2, 0.1, 1.0},
                                   VehicleState{3.0, 3.0, 0.5, -2.0}}) {
    PlannerConfig cfg;
    std::vector<Candidate> cands;
    const PlanResult r = plan(start, sc.cost, cfg, sc.bounds, &cands);
    REQUIRE(cands.size() == 847);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = cands.size();
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const Waypoint& w = cands[k].waypoint;
      SplineTrajectory t;
      try {
        t = fit_spline(start, w, cfg.horizon, cfg.dt,
                       terminal_speed(start, w, cfg.horizon, cfg.terminal_rule, sc.bounds),
                       cfg.start_speed_floor);
      } catch (const ValidationError&) {
        continue;
      }
      if (!check_feasibility(t, sc.bounds)) continue;
      double sum = 0.0;
      for (const auto& z : t.states) sum += sc.cost.interpolate(z);
      CHECK(cands[k].cost == doctest::Approx(sum).epsilon(1e-12));
      if (sum < best) {
        best = sum;
        arg = k;
      }
    }
    CHECK(r.index == arg);
    CHECK(r.cost == doctest::Approx(best).epsilon(1e-12));
    CHECK(check_feasibility(r.trajectory, sc.bounds));

    cfg.parallel = false;
    const PlanResult s = plan(start, sc.cost, cfg, sc.bounds);
    CHECK(s.index == r.index);
    CHECK(s.cost == r.cost);
  }
}

TEST_CASE("plan heads for a goal straight ahead") {
  const OpenScene sc;
  const VehicleState start{1.5, 2.0, 0.3, 0.0};
  const PlanResult r = plan(start, sc.cost, PlannerConfig{}, sc.bounds);
  const Waypoint e = to_egocentric(start, r.waypoint);
  CHECK(e.y == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(e.theta == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(e.x > 0.5);
}

TEST_CASE("adding a constant to the cost does not change the choice") {
  const OpenScene sc;
  const ValueField dense = sc.cost.materialize();
  std::vector<double> shifted(dense.values().begin(), dense.values().end());
  for (double& v : shifted)
    if (v < dense.unreachable()) v += 7.5;
  const CostMap a = CostMap::reachability(dense, {});
  const CostMap b = CostMap::reachability(
      ValueField(dense.grid(), std::move(shifted), FieldKind::kCost, dense.unreachable()), {});
  const VehicleState start{2.0, 1.0, 0.2, 0.7};
  CHECK(plan(start, a, PlannerConfig{}, sc.bounds).index ==
        plan(start, b, PlannerConfig{}, sc.bounds).index);
}

TEST_CASE("single feasible candidate is returned") {
  const OpenScene sc;
  PlannerConfig cfg;
  cfg.forward = {0.6, 5.0, 2};
  cfg.lateral = {0.0, 0.0, 1};
  cfg.heading = {0.0, 0.0, 1};
  std::vector<Candidate> c;
  const PlanResult r = plan({1.0, 2.0, 0.3, 0.0}, sc.cost, cfg, sc.bounds, &c);
  CHECK(c[0].feasible);
  CHECK_FALSE(c[1].feasible);
  CHECK(r.index == 0);
}

TEST_CASE("plan fails when every candidate is disqualified") {
  const OpenScene sc;
  const ValueField dense = sc.cost.materialize();
  const CostMap blocked = CostMap::reachability(
      ValueField(dense.grid(), std::vector<double>(dense.grid().size(), dense.unreachable()),
                 FieldKind::kCost, dense.unreachable()),
      {});
  CHECK_THROWS_AS(plan({1.0, 2.0, 0.3, 0.0}, blocked, PlannerConfig{}, sc.bounds), PlanningFailure);
  // Every candidate leaves the grid.
  CHECK_THROWS_AS(plan({0.1, 0.1, 0.3, -2.4}, sc.cost, PlannerConfig{}, sc.bounds), NumericalError);
}

TEST_CASE("planner config validation") {
  PlannerConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.steps() == 30);
  c.horizon = 1.52;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = PlannerConfig{};
  c.forward.lo = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = PlannerConfig{};
  c.heading.count = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

}
