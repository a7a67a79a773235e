#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "reachnav/cost.hpp"
#include "reachnav/dynamics.hpp"
#include "reachnav/errors.hpp"
#include "reachnav/state.hpp"

namespace reachnav {

enum class Frame { kEgocentric, kWorld };

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  Frame frame = Frame::kWorld;
};

Waypoint to_world(const VehicleState& pose, const Waypoint& ego);
Waypoint to_egocentric(const VehicleState& pose, const Waypoint& world);

// Cubic flat-output trajectory x(s), y(s), s = t / horizon in [0, 1],
// sampled every dt. states[i] and controls[i] are the flat-output
// reconstruction at t = i dt, i = 0..N.
struct SplineTrajectory {
  double horizon = 0.0;
  double dt = 0.0;
  std::array<double, 4> cx{};  // c0 + c1 s + c2 s^2 + c3 s^3
  std::array<double, 4> cy{};
  std::vector<VehicleState> states;
  std::vector<ControlInput> controls;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

enum class TerminalSpeedRule {
  // clamp(v0, 0.1 v_max, v_max)
  kStartSpeedClamped,
  // clamp(2 d / H - v0, 0.1 v_max, v_max) with d the chord length, i.e. the
  // end speed a constant acceleration would reach over the chord.
  kKinematic,
};

struct SampleRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  double value(int i) const {
    return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
  }
};

struct PlannerConfig {
  SampleRange forward{0.1, 0.9, 11};    // m
  SampleRange lateral{-0.4, 0.4, 11};   // m
  SampleRange heading{-1.0471975511965976, 1.0471975511965976, 7};  // rad
  double horizon = 1.5;  // s
  double dt = 0.05;      // s
  TerminalSpeedRule terminal_rule = TerminalSpeedRule::kKinematic;
  // Start tangent speed is max(v, start_speed_floor); the spline cannot turn
  // from a standstill, so slow starts are planned as if rolling at the floor.
  double start_speed_floor = 0.06;  // m/s
  bool parallel = true;  // OpenMP over candidates; result is identical

  void validate() const;
  int steps() const;
};

// Smallest start tangent speed, so a vehicle at rest still leaves along its
// heading.
inline constexpr double kMinStartSpeed = 1e-3;

// Egocentric forward x lateral x heading product, forward outermost, mapped to
// the world frame.
std::vector<Waypoint> sample_waypoint_grid(const VehicleState& state,
                                           const PlannerConfig& cfg);

double terminal_speed(const VehicleState& start, const Waypoint& waypoint,
                      double horizon, TerminalSpeedRule rule,
                      const DynamicsBounds& b);

// Hermite cubic per axis: position and velocity (speed along heading) at both
// ends. The start tangent uses speed max(start.v, start_speed_floor), so
// states[0].v reports that speed. Throws ValidationError when start and
// waypoint positions coincide.
SplineTrajectory fit_spline(const VehicleState& start, const Waypoint& waypoint,
                            double horizon, double dt, double end_speed,
                            double start_speed_floor = kMinStartSpeed);

// All samples: 0 <= v <= v_max, |omega| <= w_max, |a| <= a_max. No slack.
bool check_feasibility(const SplineTrajectory& traj, const DynamicsBounds& b);

class PlanningFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct Candidate {
  Waypoint waypoint;
  bool feasible = false;
  double cost = 0.0;  // sum over samples; +inf when disqualified
};

struct PlanResult {
  Waypoint waypoint;
  SplineTrajectory trajectory;
  double cost = 0.0;
  std::size_t index = 0;
};

// Scores every feasible candidate by the sum of interpolated costs over its
// samples and returns the minimum, ties to the lowest grid index. Candidates
// touching a sentinel cell or leaving the grid are disqualified. Throws
// PlanningFailure if nothing survives.
PlanResult plan(const VehicleState& state, const CostMap& cost,
                const PlannerConfig& cfg, const DynamicsBounds& b,
                std::vector<Candidate>* candidates = nullptr);

}  // namespace reachnav
