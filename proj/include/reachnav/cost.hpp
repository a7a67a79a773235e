#pragma once

#include <cstdint>
#include <optional>

#include "reachnav/distance.hpp"
#include "reachnav/grid.hpp"

namespace reachnav {

enum class CostKind : std::uint8_t { kReachability, kHeuristic };

struct CostParams {
  double alpha = 30.0;
  double ttc_cap = 4.0;
  double lambda1 = 0.3;  // m
  double lambda2 = 1.0;
};

// Planner cost over the 4D state space. The reachability map is a full 4D
// field; the heuristic map is position-only and kept as a 2D layer broadcast
// across v and phi.
class CostMap {
 public:
  static CostMap reachability(ValueField field, const CostParams& params);
  static CostMap heuristic(Grid4D grid, DistanceField planar,
                           const CostParams& params);

  CostKind kind() const { return kind_; }
  const CostParams& params() const { return params_; }
  const Grid4D& grid() const { return grid_; }
  double unreachable() const { return unreachable_; }

  double interpolate(const VehicleState& s) const;
  double node(const Index4& idx) const;
  // Dense 4D copy, e.g. for export.
  ValueField materialize() const;

 private:
  CostKind kind_ = CostKind::kReachability;
  CostParams params_;
  Grid4D grid_;
  double unreachable_ = kDefaultUnreachable;
  std::optional<ValueField> field_;
  std::optional<DistanceField> planar_;
};

// J = TTR + alpha (cap - TTC), node-wise. Sentinel TTR stays sentinel.
// Throws ValidationError on grid mismatch or TTC above the cap.
CostMap reachability_cost(const ValueField& ttr, const ValueField& ttc,
                          double alpha, double ttc_cap);

// (max(0, l1 - d_obs))^3 + l2 d_goal^2.
inline double heuristic_value(double d_obs, double d_goal, double lambda1,
                              double lambda2) {
  const double pad = d_obs < lambda1 ? lambda1 - d_obs : 0.0;
  return pad * pad * pad + lambda2 * d_goal * d_goal;
}

// Broadcasts the planar heuristic onto grid; the grid's (x, y) nodes must be
// the distance fields' cell centers.
CostMap heuristic_cost(const DistanceField& d_obs, const DistanceField& d_goal,
                       double lambda1, double lambda2, const Grid4D& grid);

}  // namespace reachnav
