#include "reachnav/hj_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "reachnav/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reachnav {

void GoalSpec::validate() const {
  if (!(radius > 0.0)) throw ValidationError("goal radius must be positive");
}

bool GoalSpec::contains(double px, double py) const {
  return std::hypot(px - x, py - y) <= radius;
}

void SolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw ValidationError("solver tolerance must be > 0");
  if (max_cycles < 1) throw ValidationError("max_cycles must be >= 1");
  if (!(ttc_cap > 0.0)) throw ValidationError("TTC cap must be > 0");
  if (!(unreachable > ttc_cap))
    throw ValidationError("unreachable sentinel must exceed the TTC cap");
  if (!(wall_penalty >= 0.0) || !std::isfinite(wall_penalty))
    throw ValidationError("wall penalty must be finite and >= 0");
}

SweepBackend resolve_backend(SweepBackend requested) {
  if (requested != SweepBackend::kAuto) return requested;
#ifdef _OPENMP
  return omp_get_max_threads() > 1 ? SweepBackend::kParallel
                                   : SweepBackend::kSerial;
#else
  return SweepBackend::kSerial;
#endif
}

Vec4 default_dissipation(const DynamicsBounds& b) {
  return {b.v_max + b.d_xy, b.v_max + b.d_xy, b.a_max, b.w_max + b.d_phi};
}

Grid4D grid_for_map(const OccupancyMap& map, const DynamicsBounds& b,
                    int v_count, int phi_count) {
  const double h = map.cell_size();
  return build_grid({Axis{map.origin_x() + 0.5 * h,
                          map.origin_x() + (map.width() - 0.5) * h,
                          map.width(), false},
                     Axis{map.origin_y() + 0.5 * h,
                          map.origin_y() + (map.height() - 0.5) * h,
                          map.height(), false},
                     Axis{0.0, b.v_max, v_count, false},
                     Axis{-std::numbers::pi, std::numbers::pi, phi_count,
                          true}});
}

namespace {

// Ghost value standing in for an obstacle neighbor. Extrapolates when the
// interior side is downhill (information arrives from the free side) and
// mirrors otherwise, so the obstacle never looks cheaper than the node.
inline double obstacle_ghost(double u0, double other) {
  return std::max(other, 2.0 * u0 - other);
}

// Lax-Friedrichs Gauss-Seidel sweeping for H(z, grad V) = 0.
//
// Node update: V = (sum_d s_d (V+ + V-) / (2 h_d) - H(central grad)) /
// sum_d s_d / h_d. Past a non-periodic grid edge the missing neighbor is a
// linear extrapolation through the node, i.e. a one-sided difference with no
// dissipation; on the v edges the acceleration set is cut to the admissible
// half so that one-sided stencil stays upwind. Neighbors flagged `missing`
// (TTR obstacles) use obstacle_ghost.
class SweepSolver {
 public:
  SweepSolver(const Grid4D& grid, const DynamicsBounds& b, HjMode mode,
              const SolveConfig& cfg, double upper)
      : grid_(grid), b_(b), mode_(mode), cfg_(cfg), upper_(upper) {
    local_ = !cfg.dissipation.has_value();
    if (mode == HjMode::kReach) wall_penalty_ = cfg.wall_penalty;
    sigma_ = cfg.dissipation.value_or(default_dissipation(b));
    const Vec4 need = default_dissipation(b);
    for (int d = 0; d < 4; ++d) {
      if (sigma_[d] < need[d] - 1e-12) {
        std::ostringstream msg;
        msg << "dissipation coefficient " << d << " = " << sigma_[d]
            << " is below the characteristic speed bound " << need[d];
        throw ValidationError(msg.str());
      }
      weight_[d] = sigma_[d] / grid.spacing(d);
    }
    const int nphi = grid.count(kPhi);
    cos_.resize(nphi);
    sin_.resize(nphi);
    for (int l = 0; l < nphi; ++l) {
      cos_[l] = std::cos(grid.coord(kPhi, l));
      sin_[l] = std::sin(grid.coord(kPhi, l));
    }
    parallel_ = resolve_backend(cfg.backend) == SweepBackend::kParallel;
    u.assign(grid.size(), 0.0);
    fixed.assign(grid.size(), 0);
    missing.assign(grid.size(), 0);
  }

  std::vector<double> u;
  std::vector<std::uint8_t> fixed;
  std::vector<std::uint8_t> missing;

  SolveReport run() {
    SolveReport rep;
    for (int cycle = 0; cycle < cfg_.max_cycles; ++cycle) {
      double res = 0.0;
      for (int o = 0; o < 16; ++o) {
        const int ord = (o + cfg_.ordering_offset) % 16;
        res = std::max(res, parallel_ ? sweep_parallel(ord)
                                      : sweep_serial(ord));
      }
      rep.residuals.push_back(res);
      rep.cycles = cycle + 1;
      if (res < cfg_.tolerance) {
        rep.converged = true;
        break;
      }
    }
    return rep;
  }

 private:
  double update(std::size_t n, const Index4& idx) {
    if (fixed[n]) return 0.0;
    const double u0 = u[n];
    Vec4 p;
    Vec4 weight = weight_;
    if (local_) {
      // |dH/dp_x| <= v |cos phi| + d_xy at this node; x and y neighbors share
      // v and phi, so this is the tightest monotone coefficient.
      const double v = grid_.coord(kV, idx[kV]);
      weight[kX] = (v * std::abs(cos_[idx[kPhi]]) + b_.d_xy) / grid_.spacing(kX);
      weight[kY] = (v * std::abs(sin_[idx[kPhi]]) + b_.d_xy) / grid_.spacing(kY);
    }
    double num = 0.0, denom = 0.0;
    for (int d = 0; d < 4; ++d) {
      const long long stride = static_cast<long long>(grid_.stride(d));
      const int jp = grid_.neighbor(d, idx[d], +1);
      const int jm = grid_.neighbor(d, idx[d], -1);
      const long long base = static_cast<long long>(n) - stride * idx[d];
      const bool hp = jp >= 0 && !missing[base + stride * jp];
      const bool hm = jm >= 0 && !missing[base + stride * jm];
      const double h = grid_.spacing(d);
      double avg;
      if (hp && hm) {
        const double up = u[base + stride * jp];
        const double um = u[base + stride * jm];
        p[d] = (up - um) / (2.0 * h);
        avg = 0.5 * (up + um);
      } else if (hp) {
        const double up = u[base + stride * jp];
        const double um = jm < 0 ? 2.0 * u0 - up : obstacle_ghost(u0, up);
        p[d] = (up - um) / (2.0 * h);
        avg = 0.5 * (up + um);
        if (jm >= 0 && d < 2) num += wall_term(idx, d, -1.0, um, u0);
      } else if (hm) {
        const double um = u[base + stride * jm];
        const double up = jp < 0 ? 2.0 * u0 - um : obstacle_ghost(u0, um);
        p[d] = (up - um) / (2.0 * h);
        avg = 0.5 * (up + um);
        if (jp >= 0 && d < 2) num += wall_term(idx, d, +1.0, up, u0);
      } else {
        p[d] = 0.0;
        avg = u0;
        if (d < 2) {
          if (jp >= 0) num += wall_term(idx, d, +1.0, u0, u0);
          if (jm >= 0) num += wall_term(idx, d, -1.0, u0, u0);
        }
      }
      num += weight[d] * avg;
      denom += weight[d];
    }
    // Only an immobile node with no disturbance and no turning has no
    // coupling at all; it keeps its value.
    if (!(denom > 0.0)) return 0.0;
    const double cand = std::clamp((num - hamiltonian_node(p, idx)) / denom,
                                   0.0, upper_);
    u[n] = cand;
    return std::abs(cand - u0);
  }

  // The advection part of the x (or y) update is v |c| / h times the upwind
  // neighbor. When that neighbor is an obstacle cell the vehicle is driving
  // into it, so the ghost is raised to at least u0 + wall_penalty for that
  // part.
  double wall_term(const Index4& idx, int d, double side, double ghost,
                   double u0) const {
    if (wall_penalty_ <= 0.0) return 0.0;
    const double c = d == kX ? cos_[idx[kPhi]] : sin_[idx[kPhi]];
    if (c * side <= 0.0) return 0.0;
    const double v = grid_.coord(kV, idx[kV]);
    return v * std::abs(c) / grid_.spacing(d) *
           std::max(0.0, u0 + wall_penalty_ - ghost);
  }

  double hamiltonian_node(const Vec4& p, const Index4& idx) const {
    const double v = grid_.coord(kV, idx[kV]);
    const double drift = -v * (p[kX] * cos_[idx[kPhi]] + p[kY] * sin_[idx[kPhi]]);
    const double a_lo = idx[kV] == 0 ? 0.0 : -b_.a_max;
    const double a_hi = idx[kV] == grid_.count(kV) - 1 ? 0.0 : b_.a_max;
    const double dist =
        b_.d_xy * std::hypot(p[kX], p[kY]) + b_.d_phi * std::abs(p[kPhi]);
    const double turn = b_.w_max * std::abs(p[kPhi]);
    if (mode_ == HjMode::kReach) {
      const double accel = std::max(-p[kV] * a_lo, -p[kV] * a_hi);
      return drift + accel + turn - dist - 1.0;
    }
    const double accel = std::min(-p[kV] * a_lo, -p[kV] * a_hi);
    return drift + accel - turn + dist - 1.0;
  }

  int oriented(int d, int r, int ord) const {
    return (ord >> d) & 1 ? grid_.count(d) - 1 - r : r;
  }

  double sweep_serial(int ord) {
    double res = 0.0;
    Index4 idx;
    const int n0 = grid_.count(0), n1 = grid_.count(1), n2 = grid_.count(2),
              n3 = grid_.count(3);
    for (int r3 = 0; r3 < n3; ++r3) {
      idx[3] = oriented(3, r3, ord);
      for (int r2 = 0; r2 < n2; ++r2) {
        idx[2] = oriented(2, r2, ord);
        for (int r1 = 0; r1 < n1; ++r1) {
          idx[1] = oriented(1, r1, ord);
          for (int r0 = 0; r0 < n0; ++r0) {
            idx[0] = oriented(0, r0, ord);
            res = std::max(res, update(grid_.linear(idx), idx));
          }
        }
      }
    }
    return res;
  }

  double sweep_parallel(int ord) {
    const int n0 = grid_.count(0), n1 = grid_.count(1), n2 = grid_.count(2),
              n3 = grid_.count(3);
    const int last_plane = n0 + n1 + n2 + n3 - 4;
    const int outer = n2 * n3;
    double res = 0.0;
    for (int c = 0; c <= last_plane; ++c) {
#pragma omp parallel for reduction(max : res) schedule(static)
      for (int t = 0; t < outer; ++t) {
        const int r2 = t % n2;
        const int r3 = t / n2;
        const int rest = c - r2 - r3;
        const int r1_lo = std::max(0, rest - (n0 - 1));
        const int r1_hi = std::min(n1 - 1, rest);
        Index4 idx;
        idx[2] = oriented(2, r2, ord);
        idx[3] = oriented(3, r3, ord);
        for (int r1 = r1_lo; r1 <= r1_hi; ++r1) {
          idx[1] = oriented(1, r1, ord);
          idx[0] = oriented(0, rest - r1, ord);
          res = std::max(res, update(grid_.linear(idx), idx));
        }
      }
    }
    return res;
  }

  const Grid4D& grid_;
  DynamicsBounds b_;
  HjMode mode_;
  SolveConfig cfg_;
  double upper_;
  bool parallel_ = false;
  Vec4 sigma_{};
  Vec4 weight_{};
  bool local_ = true;
  double wall_penalty_ = 0.0;
  std::vector<double> cos_, sin_;
};

// 8-connected shortest path length over free (x, y) nodes from the goal
// nodes. Used only as a starting guess for the sweep.
std::vector<double> planar_geodesic(const Grid4D& grid,
                                    const std::vector<std::uint8_t>& free,
                                    const std::vector<std::uint8_t>& goal) {
  const int nx = grid.count(kX), ny = grid.count(kY);
  const double hx = grid.spacing(kX), hy = grid.spacing(kY);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(free.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int c = 0; c < nx * ny; ++c)
    if (goal[c]) {
      dist[c] = 0.0;
      pq.push({0.0, c});
    }
  while (!pq.empty()) {
    const auto [dc, c] = pq.top();
    pq.pop();
    if (dc > dist[c]) continue;
    const int i = c % nx, j = c / nx;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (!di && !dj) continue;
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
        const int nc = jj * nx + ii;
        if (!free[nc]) continue;
        const double nd = dc + std::hypot(di * hx, dj * hy);
        if (nd < dist[nc]) {
          dist[nc] = nd;
          pq.push({nd, nc});
        }
      }
  }
  return dist;
}

void finish_report(const SolveReport& rep, SolveReport* out, const char* what) {
  if (out) *out = rep;
  if (!rep.converged) {
    const double last = rep.residuals.empty() ? 0.0 : rep.residuals.back();
    std::ostringstream msg;
    msg << what << " did not converge after " << rep.cycles
        << " cycles (residual " << last << ")";
    throw NonConvergenceError(msg.str(), last);
  }
}

}  // namespace

ValueField solve_ttr(const Grid4D& grid, const DynamicsBounds& b,
                     const GoalSpec& goal, const OccupancyMap& obstacles,
                     const SolveConfig& cfg, SolveReport* report) {
  b.validate();
  goal.validate();
  cfg.validate();
  const int nx = grid.count(kX), ny = grid.count(kY);
  std::vector<std::uint8_t> free(nx * ny), in_goal(nx * ny);
  bool any_goal = false;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = grid.coord(kX, i), y = grid.coord(kY, j);
      const int c = j * nx + i;
      free[c] = !obstacles.occupied_at(x, y);
      in_goal[c] = free[c] && goal.contains(x, y);
      any_goal = any_goal || in_goal[c];
    }
  if (!any_goal)
    throw InfeasibleError("goal disk contains no free grid node");
  const auto geo = planar_geodesic(grid, free, in_goal);

  SweepSolver solver(grid, b, HjMode::kReach, cfg, cfg.unreachable);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Index4 idx = grid.unravel(n);
    const int c = idx[kY] * nx + idx[kX];
    const bool immobile = b.a_max == 0.0 && grid.coord(kV, idx[kV]) == 0.0;
    if (in_goal[c]) {
      solver.u[n] = 0.0;
      solver.fixed[n] = 1;
    } else if (!free[c] || !std::isfinite(geo[c]) || immobile) {
      solver.u[n] = cfg.unreachable;
      solver.fixed[n] = 1;
      solver.missing[n] = 1;
    } else {
      solver.u[n] = geo[c] / b.v_max;
    }
  }
  const SolveReport rep = solver.run();
  finish_report(rep, report, "TTR sweep");
  return ValueField(grid, std::move(solver.u), FieldKind::kTTR,
                    cfg.unreachable);
}

ValueField solve_ttc(const Grid4D& grid, const DynamicsBounds& b,
                     const OccupancyMap& obstacles, const SolveConfig& cfg,
                     SolveReport* report) {
  b.validate();
  cfg.validate();
  SweepSolver solver(grid, b, HjMode::kAvoid, cfg, cfg.ttc_cap);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Index4 idx = grid.unravel(n);
    if (obstacles.occupied_at(grid.coord(kX, idx[kX]),
                              grid.coord(kY, idx[kY]))) {
      solver.u[n] = 0.0;
      solver.fixed[n] = 1;
    } else {
      solver.u[n] = cfg.ttc_cap;
    }
  }
  const SolveReport rep = solver.run();
  finish_report(rep, report, "TTC sweep");
  return ValueField(grid, std::move(solver.u), FieldKind::kTTC,
                    cfg.unreachable);
}

}  // namespace reachnav
