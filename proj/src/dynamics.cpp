#include "reachnav/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reachnav/errors.hpp"

namespace reachnav {

namespace {

// Relative slack for validating inputs that come out of clamps or
// normalizations elsewhere.
constexpr double kBoundSlack = 1e-9;

}  // namespace

void DynamicsBounds::validate() const {
  if (!(v_max > 0.0)) throw ValidationError("v_max must be positive");
  if (a_max < 0.0 || w_max < 0.0 || d_xy < 0.0 || d_phi < 0.0)
    throw ValidationError("dynamics bounds must be nonnegative");
}

Vec4 vehicle_rates(const VehicleState& s, const ControlInput& u,
                   const Disturbance& d) {
  return {s.v * std::cos(s.phi) + d.dx, s.v * std::sin(s.phi) + d.dy, u.a,
          u.omega + d.dphi};
}

VehicleState step(const VehicleState& s, const ControlInput& u,
                  const Disturbance& d, double dt, const DynamicsBounds& b) {
  if (!(dt > 0.0)) throw ValidationError("step: dt must be positive");
  const double slack = 1.0 + kBoundSlack;
  if (std::abs(u.a) > b.a_max * slack || std::abs(u.omega) > b.w_max * slack) {
    std::ostringstream msg;
    msg << "step: control (" << u.a << ", " << u.omega << ") exceeds bounds";
    throw ValidationError(msg.str());
  }
  if (std::hypot(d.dx, d.dy) > b.d_xy * slack + 1e-15 ||
      std::abs(d.dphi) > b.d_phi * slack + 1e-15)
    throw ValidationError("step: disturbance exceeds bounds");

  auto rates = [&](const std::array<double, 4>& z) {
    const double v = std::clamp(z[2], 0.0, b.v_max);
    double a = u.a;
    if ((z[2] <= 0.0 && a < 0.0) || (z[2] >= b.v_max && a > 0.0)) a = 0.0;
    return std::array<double, 4>{v * std::cos(z[3]) + d.dx,
                                 v * std::sin(z[3]) + d.dy, a,
                                 u.omega + d.dphi};
  };
  const std::array<double, 4> z0{s.x, s.y, s.v, s.phi};
  auto axpy = [](const std::array<double, 4>& z, double h,
                 const std::array<double, 4>& k) {
    return std::array<double, 4>{z[0] + h * k[0], z[1] + h * k[1],
                                 z[2] + h * k[2], z[3] + h * k[3]};
  };
  const auto k1 = rates(z0);
  const auto k2 = rates(axpy(z0, dt / 2, k1));
  const auto k3 = rates(axpy(z0, dt / 2, k2));
  const auto k4 = rates(axpy(z0, dt, k3));
  std::array<double, 4> z;
  for (int i = 0; i < 4; ++i)
    z[i] = z0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return {z[0], z[1], std::clamp(z[2], 0.0, b.v_max), wrap_angle(z[3])};
}

VehicleState euler_step(const VehicleState& s, const ControlInput& u,
                        double dt) {
  return {s.x + dt * s.v * std::cos(s.phi), s.y + dt * s.v * std::sin(s.phi),
          s.v + dt * u.a, s.phi + dt * u.omega};
}

double hamiltonian(const Vec4& p, const VehicleState& s,
                   const DynamicsBounds& b, HjMode mode) {
  const double drift = -p[kX] * s.v * std::cos(s.phi) -
                       p[kY] * s.v * std::sin(s.phi);
  const double ctrl = b.a_max * std::abs(p[kV]) + b.w_max * std::abs(p[kPhi]);
  const double dist =
      b.d_xy * std::hypot(p[kX], p[kY]) + b.d_phi * std::abs(p[kPhi]);
  return mode == HjMode::kReach ? drift + ctrl - dist - 1.0
                                : drift - ctrl + dist - 1.0;
}

ControlInput optimal_control(const Vec4& p, const DynamicsBounds& b,
                             HjMode mode) {
  const double s = mode == HjMode::kReach ? -1.0 : 1.0;
  return {s * b.a_max * sign_pos(p[kV]), s * b.w_max * sign_pos(p[kPhi])};
}

Disturbance optimal_disturbance(const Vec4& p, const DynamicsBounds& b,
                                HjMode mode) {
  const double s = mode == HjMode::kReach ? 1.0 : -1.0;
  const double n = std::hypot(p[kX], p[kY]);
  Disturbance d;
  if (n > 0.0) {
    d.dx = s * b.d_xy * p[kX] / n;
    d.dy = s * b.d_xy * p[kY] / n;
  }
  d.dphi = s * b.d_phi * sign_pos(p[kPhi]);
  return d;
}

double hamiltonian_at(const Vec4& p, const VehicleState& s,
                      const ControlInput& u, const Disturbance& d) {
  const Vec4 f = vehicle_rates(s, u, d);
  return -(p[0] * f[0] + p[1] * f[1] + p[2] * f[2] + p[3] * f[3]) - 1.0;
}

}  // namespace reachnav
