#pragma once

#include <cmath>
#include <numbers>

namespace reachnav {

// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(a + std::numbers::pi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  return r >= std::numbers::pi ? -std::numbers::pi : r;
}

struct VehicleState {
  double x = 0.0;    // m
  double y = 0.0;    // m
  double v = 0.0;    // m/s
  double phi = 0.0;  // rad

  bool operator==(const VehicleState&) const = default;
};

struct ControlInput {
  double a = 0.0;      // m/s^2
  double omega = 0.0;  // rad/s

  bool operator==(const ControlInput&) const = default;
};

struct Disturbance {
  double dx = 0.0;    // m/s
  double dy = 0.0;    // m/s
  double dphi = 0.0;  // rad/s

  bool operator==(const Disturbance&) const = default;
};

}  // namespace reachnav
