#pragma once

#include <optional>
#include <vector>

#include "reachnav/dynamics.hpp"
#include "reachnav/grid.hpp"
#include "reachnav/occupancy_map.hpp"

namespace reachnav {

struct GoalSpec {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.3;

  void validate() const;
  bool contains(double px, double py) const;
};

// How each Gauss-Seidel pass visits the grid. kSerial is the lexicographic
// reference; kParallel walks anti-diagonal hyperplanes (sum of oriented
// indices constant), whose nodes are mutually independent, with OpenMP.
// kAuto picks kParallel when more than one OpenMP thread is available.
enum class SweepBackend { kAuto, kSerial, kParallel };

SweepBackend resolve_backend(SweepBackend requested);

struct SolveConfig {
  double tolerance = 1e-3;  // s, max node change per cycle
  int max_cycles = 500;     // one cycle = 16 sweep orderings
  double ttc_cap = 4.0;     // s
  // Per-axis Lax-Friedrichs coefficients, applied uniformly. If unset the
  // x and y coefficients are local, v |cos phi| + d_xy and v |sin phi| + d_xy
  // at each node, and v and phi use default_dissipation.
  std::optional<Vec4> dissipation;
  // TTR only: extra time (s) charged when a node's upwind x or y neighbor is
  // an obstacle cell. 0 lets the field slide along walls it is heading into.
  double wall_penalty = 2.0;
  SweepBackend backend = SweepBackend::kAuto;
  // Permutes the order in which the 16 orderings run within a cycle.
  int ordering_offset = 0;
  double unreachable = kDefaultUnreachable;

  void validate() const;
};

struct SolveReport {
  std::vector<double> residuals;  // one per cycle
  int cycles = 0;
  bool converged = false;
};

// Global bounds: sigma_x = sigma_y = v_max + d_xy, sigma_v = a_max, sigma_phi = w_max + d_phi.
Vec4 default_dissipation(const DynamicsBounds& b);

// Grid whose (x, y) nodes sit on the map's cell centers.
Grid4D grid_for_map(const OccupancyMap& map, const DynamicsBounds& b,
                    int v_count = 7, int phi_count = 24);

// Time-to-reach. Goal nodes (free nodes inside the goal disk) are 0, occupied
// nodes carry the sentinel. Throws InfeasibleError when no free node lies in
// the goal disk and NonConvergenceError after max_cycles.
ValueField solve_ttr(const Grid4D& grid, const DynamicsBounds& b,
                     const GoalSpec& goal, const OccupancyMap& obstacles,
                     const SolveConfig& cfg, SolveReport* report = nullptr);

// Time-to-collision, capped at cfg.ttc_cap. Occupied nodes are 0.
ValueField solve_ttc(const Grid4D& grid, const DynamicsBounds& b,
                     const OccupancyMap& obstacles, const SolveConfig& cfg,
                     SolveReport* report = nullptr);

}  // namespace reachnav
