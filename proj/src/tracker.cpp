#include "reachnav/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "reachnav/errors.hpp"

namespace reachnav {

void LqrWeights::validate() const {
  if ((q.array() < 0.0).any() || !q.allFinite())
    throw ValidationError("LQR Q must be positive semidefinite");
  if ((r.array() <= 0.0).any() || !r.allFinite())
    throw ValidationError("LQR R must be positive definite");
}

Linearization linearize(const VehicleState& z, const ControlInput&, double dt) {
  Linearization l;
  const double c = std::cos(z.phi), s = std::sin(z.phi);
  l.A.setIdentity();
  l.A(0, 2) = dt * c;
  l.A(0, 3) = -dt * z.v * s;
  l.A(1, 2) = dt * s;
  l.A(1, 3) = dt * z.v * c;
  l.B.setZero();
  l.B(2, 0) = dt;
  l.B(3, 1) = dt;
  return l;
}

namespace {
bool is_psd(const Eigen::MatrixXd& m, double rel_floor) {
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
          .eigenvalues();
  return ev.size() == 0 || ev(0) >= -rel_floor * std::max(1.0, m.norm());
}
}  // namespace

RiccatiResult solve_lqr(const std::vector<Eigen::MatrixXd>& A,
                        const std::vector<Eigen::MatrixXd>& B,
                        const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const std::size_t n = A.size();
  if (n == 0 || B.size() != n)
    throw ValidationError("solve_lqr: A and B sequences must be nonempty and equal length");
  const Eigen::Index nx = Q.rows(), nu = R.rows();
  if (Q.cols() != nx || R.cols() != nu)
    throw ValidationError("solve_lqr: Q and R must be square");
  for (std::size_t k = 0; k < n; ++k)
    if (A[k].rows() != nx || A[k].cols() != nx || B[k].rows() != nx ||
        B[k].cols() != nu)
      throw ValidationError("solve_lqr: non-conformal A/B at step " + std::to_string(k));
  if (!Q.isApprox(Q.transpose()) || !is_psd(Q, 1e-12))
    throw ValidationError("solve_lqr: Q must be symmetric positive semidefinite");
  Eigen::LLT<Eigen::MatrixXd> r_llt(R);
  if (!R.isApprox(R.transpose()) || r_llt.info() != Eigen::Success)
    throw ValidationError("solve_lqr: R must be symmetric positive definite");

  RiccatiResult out;
  out.gains.resize(n);
  out.cost_to_go.resize(n + 1);
  Eigen::MatrixXd P = Q;
  out.cost_to_go[n] = P;
  for (std::size_t k = n; k-- > 0;) {
    const Eigen::MatrixXd BtP = B[k].transpose() * P;
    const Eigen::MatrixXd S = R + BtP * B[k];
    const Eigen::MatrixXd K = S.ldlt().solve(BtP * A[k]);
    out.gains[k] = K;
    P = Q + A[k].transpose() * P * (A[k] - B[k] * K);
    P = (0.5 * (P + P.transpose())).eval();
    if (!P.allFinite() || !K.allFinite())
      throw NumericalError("Riccati recursion produced non-finite values");
    if (!is_psd(P, 1e-10))
      throw NumericalError("Riccati iterate is not positive semidefinite");
    out.cost_to_go[k] = P;
  }
  return out;
}

LqrGains solve_lqr(const SplineTrajectory& ref, const LqrWeights& w) {
  w.validate();
  const std::size_t n = ref.steps();
  if (n == 0) throw ValidationError("solve_lqr: empty reference");
  std::vector<Eigen::MatrixXd> A(n), B(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Linearization l = linearize(ref.states[k], ref.controls[k], ref.dt);
    A[k] = l.A;
    B[k] = l.B;
  }
  const RiccatiResult rr = solve_lqr(A, B, Eigen::MatrixXd(w.q.asDiagonal()),
                                     Eigen::MatrixXd(w.r.asDiagonal()));
  LqrGains out;
  out.q = w.q;
  out.r = w.r;
  out.gains.reserve(n);
  for (const auto& K : rr.gains) out.gains.push_back(K);
  return out;
}

ControlInput track_step(const VehicleState& z, const SplineTrajectory& ref,
                        const LqrGains& gains, std::size_t k,
                        const DynamicsBounds& b) {
  if (k >= gains.gains.size() || k >= ref.states.size())
    throw DomainError("track_step: step index past the reference");
  const VehicleState& r = ref.states[k];
  const Eigen::Vector4d err(r.x - z.x, r.y - z.y, r.v - z.v,
                            wrap_angle(r.phi - z.phi));
  const Eigen::Vector2d du = gains.gains[k] * err;
  return {std::clamp(ref.controls[k].a + du(0), -b.a_max, b.a_max),
          std::clamp(ref.controls[k].omega + du(1), -b.w_max, b.w_max)};
}

}  // namespace reachnav
