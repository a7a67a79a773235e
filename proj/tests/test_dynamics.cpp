#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reachnav/dynamics.hpp"
#include "reachnav/errors.hpp"

using namespace reachnav;

TEST_SUITE("dynamics") {

TEST_CASE("closed-form Hamiltonian matches exhaustive search") {
  const DynamicsBounds b;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> uv(0.0, b.v_max), up(-3.14, 3.14);
  double worst = 0.0;
  for (int k = 0; k < 150; ++k) {
    const Vec4 p{n(rng), n(rng), n(rng), n(rng)};
    const VehicleState s{0.0, 0.0, uv(rng), up(rng)};
    for (bool reach : {true, false}) {
      const double closed = hamiltonian(p, s, b, reach ? HjMode::kReach : HjMode::kAvoid);
      const double brute = oracle::brute_hamiltonian(p, s, b, reach, 5, 5, 720);
      worst = std::max(worst, std::abs(closed - brute));
    }
  }
  CHECK(worst < 2e-3);
}

TEST_CASE("optimal inputs attain the Hamiltonian") {
  const DynamicsBounds b;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Vec4 p{n(rng), n(rng), n(rng), n(rng)};
    const VehicleState s{0.0, 0.0, 0.3, n(rng)};
    for (HjMode mode : {HjMode::kReach, HjMode::kAvoid}) {
      const ControlInput u = optimal_control(p, b, mode);
      const Disturbance d = optimal_disturbance(p, b, mode);
      CHECK(std::abs(u.a) == doctest::Approx(b.a_max));
      CHECK(std::abs(u.omega) == doctest::Approx(b.w_max));
      CHECK(std::hypot(d.dx, d.dy) <= b.d_xy + 1e-12);
      CHECK(hamiltonian_at(p, s, u, d) ==
            doctest::Approx(hamiltonian(p, s, b, mode)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero gradient component picks the positive control") {
  const DynamicsBounds b;
  const ControlInput u = optimal_control({1.0, 0.0, 0.0, 0.0}, b, HjMode::kReach);
  CHECK(sign_pos(0.0) == 1.0);
  CHECK(std::abs(u.a) == doctest::Approx(b.a_max));
}

TEST_CASE("RK4 is exact for straight motion under constant acceleration") {
  const DynamicsBounds b;
  VehicleState s{1.0, -2.0, 0.1, 0.5};
  for (int k = 0; k < 10; ++k) s = step(s, {0.4, 0.0}, {}, 0.05, b);
  const double dist = 0.1 * 0.5 + 0.5 * 0.4 * 0.25;
  CHECK(s.v == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.x == doctest::Approx(1.0 + dist * std::cos(0.5)).epsilon(1e-12));
  CHECK(s.y == doctest::Approx(-2.0 + dist * std::sin(0.5)).epsilon(1e-12));
  CHECK(s.phi == doctest::Approx(0.5));
}

TEST_CASE("RK4 follows a constant-rate arc") {
  const DynamicsBounds b;
  const double v = 0.4, w = 0.8, phi0 = -0.3, T = 1.0;
  VehicleState s{0.0, 0.0, v, phi0};
  for (int k = 0; k < 20; ++k) s = step(s, {0.0, w}, {}, 0.05, b);
  CHECK(s.x == doctest::Approx(v / w * (std::sin(phi0 + w * T) - std::sin(phi0))).epsilon(1e-7));
  CHECK(s.y == doctest::Approx(-v / w * (std::cos(phi0 + w * T) - std::cos(phi0))).epsilon(1e-7));
  CHECK(s.phi == doctest::Approx(phi0 + w * T));
}

TEST_CASE("disturbance adds drift") {
  DynamicsBounds b;
  const VehicleState s = step({0, 0, 0, 0}, {0, 0}, {0.03, -0.04, 0.1}, 1.0, b);
  CHECK(s.x == doctest::Approx(0.03));
  CHECK(s.y == doctest::Approx(-0.04));
  CHECK(s.phi == doctest::Approx(0.1));
}

TEST_CASE("speed saturates at both bounds") {
  const DynamicsBounds b;
  CHECK(step({0, 0, 0.58, 0}, {0.4, 0}, {}, 0.1, b).v == doctest::Approx(0.6));
  CHECK(step({0, 0, 0.01, 0}, {-0.4, 0}, {}, 0.1, b).v == 0.0);
  const VehicleState s = step({0, 0, 0.0, 0}, {-0.4, 0}, {}, 0.5, b);
  CHECK(s.x == 0.0);
}

TEST_CASE("heading wraps after a step") {
  const DynamicsBounds b;
  const VehicleState s = step({0, 0, 0, 3.1}, {0, 1.0}, {}, 0.1, b);
  CHECK(s.phi == doctest::Approx(3.2 - 2 * std::numbers::pi));
}

TEST_CASE("out-of-bound inputs are rejected") {
  const DynamicsBounds b;
  CHECK_THROWS_AS(step({}, {0.5, 0}, {}, 0.05, b), ValidationError);
  CHECK_THROWS_AS(step({}, {0, -1.2}, {}, 0.05, b), ValidationError);
  CHECK_THROWS_AS(step({}, {0, 0}, {0.05, 0.05, 0}, 0.05, b), ValidationError);
  CHECK_THROWS_AS(step({}, {0, 0}, {}, 0.0, b), ValidationError);
  CHECK_NOTHROW(step({}, {b.a_max, -b.w_max}, {0.05, 0.0, 0.15}, 0.05, b));
  DynamicsBounds bad;
  bad.v_max = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("euler_step is the explicit map") {
  const VehicleState s{1, 2, 0.3, 0.7};
  const VehicleState e = euler_step(s, {0.2, -0.5}, 0.05);
  CHECK(e.x == doctest::Approx(1 + 0.05 * 0.3 * std::cos(0.7)));
  CHECK(e.y == doctest::Approx(2 + 0.05 * 0.3 * std::sin(0.7)));
  CHECK(e.v == doctest::Approx(0.31));
  CHECK(e.phi == doctest::Approx(0.675));
}

}
