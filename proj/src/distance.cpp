#include "reachnav/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "reachnav/errors.hpp"

namespace reachnav {

namespace {

DistanceField lattice_of(const OccupancyMap& map, DistanceKind kind) {
  DistanceField f;
  f.nx = map.width();
  f.ny = map.height();
  f.h = map.cell_size();
  f.x0 = map.center_x(0);
  f.y0 = map.center_y(0);
  f.kind = kind;
  f.values.assign(static_cast<std::size_t>(f.nx) * f.ny, 0.0);
  return f;
}

// 1D squared-distance transform (lower envelope of parabolas).
void edt_1d(const double* f, double* d, int n, std::vector<int>& v,
            std::vector<double>& z) {
  const double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == inf) continue;
    if (f[v[k]] == inf) {
      v[k] = q;
      continue;
    }
    double s;
    for (;;) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
      if (s > z[k] || k == 0) break;
      --k;
    }
    if (s <= z[k]) {
      v[k] = q;
      z[k + 1] = inf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = f[v[k]] == inf ? inf : dq * dq + f[v[k]];
  }
}

}  // namespace

double DistanceField::interpolate(double x, double y) const {
  const double tol = 1e-9 * h;
  const double ux = (x - x0) / h, uy = (y - y0) / h;
  if (ux < -tol || uy < -tol || ux > nx - 1 + tol || uy > ny - 1 + tol)
    throw DomainError("distance query outside the map");
  const double cx = std::clamp(ux, 0.0, double(nx - 1));
  const double cy = std::clamp(uy, 0.0, double(ny - 1));
  const int i0 = std::min(static_cast<int>(cx), nx - 2);
  const int j0 = std::min(static_cast<int>(cy), ny - 2);
  const double tx = cx - i0, ty = cy - j0;
  double acc = 0.0;
  for (int c = 0; c < 4; ++c) {
    const int di = c & 1, dj = c >> 1;
    const double w = (di ? tx : 1 - tx) * (dj ? ty : 1 - ty);
    if (w <= 0.0) continue;
    const double v = at(i0 + di, j0 + dj);
    if (v >= unreachable) return unreachable;
    acc += w * v;
  }
  return acc;
}

DistanceField obstacle_distance(const OccupancyMap& map) {
  DistanceField f = lattice_of(map, DistanceKind::kObstacle);
  const int nx = f.nx, ny = f.ny, n = std::max(nx, ny);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      grid[static_cast<std::size_t>(j) * nx + i] = map.occupied(i, j) ? 0.0 : inf;
  std::vector<double> in(n), out(n), z(n + 1);
  std::vector<int> v(n);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) in[j] = grid[static_cast<std::size_t>(j) * nx + i];
    edt_1d(in.data(), out.data(), ny, v, z);
    for (int j = 0; j < ny; ++j) grid[static_cast<std::size_t>(j) * nx + i] = out[j];
  }
  for (int j = 0; j < ny; ++j) {
    double* row = grid.data() + static_cast<std::size_t>(j) * nx;
    std::copy(row, row + nx, in.begin());
    edt_1d(in.data(), out.data(), nx, v, z);
    for (int i = 0; i < nx; ++i)
      f.values[static_cast<std::size_t>(j) * nx + i] = std::sqrt(out[i]) * f.h;
  }
  return f;
}

DistanceField goal_distance(const OccupancyMap& map, const GoalSpec& goal) {
  goal.validate();
  if (map.occupied_at(goal.x, goal.y))
    throw InfeasibleError("goal center lies in an obstacle");
  DistanceField f = lattice_of(map, DistanceKind::kGoal);
  const int nx = f.nx, ny = f.ny;
  const double h = f.h;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(f.values.size(), inf);
  std::vector<std::uint8_t> known(f.values.size(), 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  bool any_inside = false;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (map.occupied(i, j)) continue;
      const double d = std::max(
          0.0, std::hypot(map.center_x(i) - goal.x, map.center_y(j) - goal.y) -
                   goal.radius);
      if (d == 0.0) any_inside = true;
      if (d <= h) {
        const int c = j * nx + i;
        u[c] = d;
        known[c] = 1;
        heap.push({d, c});
      }
    }
  if (!any_inside) throw InfeasibleError("goal disk holds no free cell");

  auto solve_at = [&](int i, int j) {
    auto axis_min = [&](int a, int b) {
      double m = inf;
      for (int c : {a, b})
        if (c >= 0 && known[c]) m = std::min(m, u[c]);
      return m;
    };
    const double a = axis_min(i > 0 ? j * nx + i - 1 : -1,
                              i < nx - 1 ? j * nx + i + 1 : -1);
    const double b = axis_min(j > 0 ? (j - 1) * nx + i : -1,
                              j < ny - 1 ? (j + 1) * nx + i : -1);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (hi == inf || hi - lo >= h) return lo + h;
    return 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
  };

  while (!heap.empty()) {
    const auto [d, c] = heap.top();
    heap.pop();
    if (d > u[c]) continue;
    known[c] = 1;
    const int i = c % nx, j = c / nx;
    const int nbs[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
    for (const auto& nb : nbs) {
      const int ii = nb[0], jj = nb[1];
      if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
      const int nc = jj * nx + ii;
      if (known[nc] || map.occupied(ii, jj)) continue;
      const double cand = solve_at(ii, jj);
      if (cand < u[nc]) {
        u[nc] = cand;
        heap.push({cand, nc});
      }
    }
  }
  for (std::size_t c = 0; c < u.size(); ++c)
    f.values[c] = std::isfinite(u[c]) ? u[c] : f.unreachable;
  return f;
}

}  // namespace reachnav
