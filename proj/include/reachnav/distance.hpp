#pragma once

#include <cstdint>
#include <vector>

#include "reachnav/grid.hpp"
#include "reachnav/hj_solver.hpp"
#include "reachnav/occupancy_map.hpp"

namespace reachnav {

enum class DistanceKind : std::uint8_t { kObstacle, kGoal };

// Scalar field over map cell centers, in meters.
struct DistanceField {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;  // center of cell (0, 0)
  double y0 = 0.0;
  double h = 0.1;
  DistanceKind kind = DistanceKind::kObstacle;
  double unreachable = kDefaultUnreachable;
  std::vector<double> values;

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * nx + i];
  }
  // Bilinear, with the same sentinel rule as 4D interpolation. Throws
  // DomainError outside the node hull.
  double interpolate(double x, double y) const;
  bool same_lattice(const DistanceField& o) const {
    return nx == o.nx && ny == o.ny && x0 == o.x0 && y0 == o.y0 && h == o.h;
  }
};

// Exact Euclidean distance between cell centers to the nearest occupied cell.
DistanceField obstacle_distance(const OccupancyMap& map);

// Obstacle-respecting distance to the goal disk by first-order fast marching.
// Cells inside the disk are 0, occupied and unreachable cells carry the
// sentinel. Throws InfeasibleError if the goal center is occupied or the disk
// holds no free cell.
DistanceField goal_distance(const OccupancyMap& map, const GoalSpec& goal);

}  // namespace reachnav
