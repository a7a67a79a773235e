#pragma once

#include "reachnav/grid.hpp"
#include "reachnav/state.hpp"

namespace reachnav {

// Input and state bounds of the disturbed unicycle. Defaults match a
// Turtlebot-class base.
struct DynamicsBounds {
  double v_max = 0.6;    // m/s
  double a_max = 0.4;    // m/s^2
  double w_max = 1.1;    // rad/s
  double d_xy = 0.05;    // m/s, radius of the planar disturbance disk
  double d_phi = 0.15;   // rad/s

  void validate() const;
  DynamicsBounds without_disturbance() const {
    DynamicsBounds b = *this;
    b.d_xy = 0.0;
    b.d_phi = 0.0;
    return b;
  }
};

enum class HjMode { kReach, kAvoid };

// Sign with sign(0) = +1.
inline double sign_pos(double x) { return x < 0.0 ? -1.0 : 1.0; }

// State derivative f(z, u, d).
Vec4 vehicle_rates(const VehicleState& s, const ControlInput& u,
                   const Disturbance& d);

// One RK4 step. The speed state constraint is enforced as a projection: the
// integrand saturates v to [0, v_max] and the result is clamped; phi is
// wrapped after the full step. Throws ValidationError on out-of-bound inputs.
VehicleState step(const VehicleState& s, const ControlInput& u,
                  const Disturbance& d, double dt, const DynamicsBounds& b);

// Undisturbed explicit Euler map, no clamping or wrapping. This is the
// discretization the planner and tracker linearize.
VehicleState euler_step(const VehicleState& s, const ControlInput& u,
                        double dt);

// Closed-form max_u min_d (reach) or min_u max_d (avoid) of -grad.f - 1.
double hamiltonian(const Vec4& grad, const VehicleState& s,
                   const DynamicsBounds& b, HjMode mode);

ControlInput optimal_control(const Vec4& grad, const DynamicsBounds& b,
                             HjMode mode);

Disturbance optimal_disturbance(const Vec4& grad, const DynamicsBounds& b,
                                HjMode mode);

// Evaluates -grad.f(s, u, d) - 1 for explicit inputs.
double hamiltonian_at(const Vec4& grad, const VehicleState& s,
                      const ControlInput& u, const Disturbance& d);

}  // namespace reachnav
