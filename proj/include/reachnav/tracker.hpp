#pragma once

#include <vector>

#include <Eigen/Dense>

#include "reachnav/dynamics.hpp"
#include "reachnav/planner.hpp"
#include "reachnav/state.hpp"

namespace reachnav {

using Mat4 = Eigen::Matrix4d;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat24 = Eigen::Matrix<double, 2, 4>;

struct LqrWeights {
  Eigen::Vector4d q{1.0, 1.0, 0.1, 0.5};  // diag Q over (x, y, v, phi)
  Eigen::Vector2d r{0.1, 0.1};            // diag R over (a, omega)
  void validate() const;
};

struct Linearization {
  Mat4 A;
  Mat42 B;
};

// Forward-Euler discretization of the undisturbed dynamics about (z, u).
Linearization linearize(const VehicleState& z, const ControlInput& u, double dt);

// Finite-horizon discrete LQR over time-varying (A_k, B_k), k = 0..N-1, with
// terminal cost Q: K_k = (R + B'PB)^-1 B'PA, P <- Q + A'P(A - BK),
// symmetrized after every step. cost_to_go[k] is the cost-to-go at step k,
// cost_to_go[N] = Q, and K_k is computed from cost_to_go[k + 1].
struct RiccatiResult {
  std::vector<Eigen::MatrixXd> gains;
  std::vector<Eigen::MatrixXd> cost_to_go;
};

// Throws ValidationError on non-conformal shapes, Q not PSD or R not PD, and
// NumericalError if an iterate loses positive semidefiniteness (eigenvalue
// below -1e-10 relative to its scale) or turns non-finite.
RiccatiResult solve_lqr(const std::vector<Eigen::MatrixXd>& A,
                        const std::vector<Eigen::MatrixXd>& B,
                        const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

// Time-varying feedback gains along a reference, gains[k] for k = 0..N-1.
struct LqrGains {
  std::vector<Mat24> gains;
  Eigen::Vector4d q;
  Eigen::Vector2d r;
};

// Linearizes the reference at every step and runs the recursion above.
LqrGains solve_lqr(const SplineTrajectory& ref, const LqrWeights& w);

// u = u_ref[k] + K[k] (z_ref[k] - z) with wrapped heading error, clamped to the
// control bounds.
ControlInput track_step(const VehicleState& z, const SplineTrajectory& ref,
                        const LqrGains& gains, std::size_t k,
                        const DynamicsBounds& b);

}  // namespace reachnav
