#include "reachnav/cost.hpp"

#include <algorithm>
#include <cmath>

#include "reachnav/errors.hpp"

namespace reachnav {

CostMap CostMap::reachability(ValueField field, const CostParams& params) {
  CostMap m;
  m.kind_ = CostKind::kReachability;
  m.params_ = params;
  m.grid_ = field.grid();
  m.unreachable_ = field.unreachable();
  m.field_ = std::move(field);
  return m;
}

CostMap CostMap::heuristic(Grid4D grid, DistanceField planar,
                           const CostParams& params) {
  if (planar.nx != grid.count(kX) || planar.ny != grid.count(kY) ||
      std::abs(planar.x0 - grid.coord(kX, 0)) > 1e-9 ||
      std::abs(planar.y0 - grid.coord(kY, 0)) > 1e-9 ||
      std::abs(planar.h - grid.spacing(kX)) > 1e-9 ||
      std::abs(planar.h - grid.spacing(kY)) > 1e-9)
    throw ValidationError("heuristic layer does not match the grid's (x, y) nodes");
  CostMap m;
  m.kind_ = CostKind::kHeuristic;
  m.params_ = params;
  m.grid_ = std::move(grid);
  m.unreachable_ = planar.unreachable;
  m.planar_ = std::move(planar);
  return m;
}

double CostMap::interpolate(const VehicleState& s) const {
  if (field_) return reachnav::interpolate(*field_, s);
  const Axis& v = grid_.axis(kV);
  if (s.v < v.lo - 1e-9 || s.v > v.hi + 1e-9)
    throw DomainError("speed outside cost map grid");
  return planar_->interpolate(s.x, s.y);
}

double CostMap::node(const Index4& idx) const {
  if (field_) return field_->at(idx);
  return planar_->at(idx[kX], idx[kY]);
}

ValueField CostMap::materialize() const {
  if (field_) return *field_;
  std::vector<double> vals(grid_.size());
  for (std::size_t n = 0; n < vals.size(); ++n) {
    const Index4 idx = grid_.unravel(n);
    vals[n] = planar_->at(idx[kX], idx[kY]);
  }
  return ValueField(grid_, std::move(vals), FieldKind::kCost, unreachable_);
}

CostMap reachability_cost(const ValueField& ttr, const ValueField& ttc,
                          double alpha, double ttc_cap) {
  if (!(ttr.grid() == ttc.grid()))
    throw ValidationError("TTR and TTC fields are on different grids");
  if (alpha < 0.0) throw ValidationError("alpha must be nonnegative");
  const auto t = ttr.values();
  const auto c = ttc.values();
  const double sentinel = ttr.unreachable();
  for (double v : c)
    if (v > ttc_cap + 1e-12)
      throw ValidationError("TTC value exceeds the cap");
  std::vector<double> j(t.size());
  const long long n = static_cast<long long>(t.size());
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) {
    j[k] = t[k] >= sentinel
               ? sentinel
               : std::min(sentinel, t[k] + alpha * (ttc_cap - c[k]));
  }
  CostParams params;
  params.alpha = alpha;
  params.ttc_cap = ttc_cap;
  return CostMap::reachability(
      ValueField(ttr.grid(), std::move(j), FieldKind::kCost, sentinel), params);
}

CostMap heuristic_cost(const DistanceField& d_obs, const DistanceField& d_goal,
                       double lambda1, double lambda2, const Grid4D& grid) {
  if (!d_obs.same_lattice(d_goal))
    throw ValidationError("distance fields are on different lattices");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw ValidationError("lambda1 and lambda2 must be positive");
  DistanceField layer = d_goal;
  for (std::size_t k = 0; k < layer.values.size(); ++k) {
    const double g = d_goal.values[k];
    layer.values[k] = g >= d_goal.unreachable
                          ? d_goal.unreachable
                          : std::min(d_goal.unreachable,
                                     heuristic_value(d_obs.values[k], g,
                                                     lambda1, lambda2));
  }
  CostParams params;
  params.lambda1 = lambda1;
  params.lambda2 = lambda2;
  return CostMap::heuristic(grid, std::move(layer), params);
}

}  // namespace reachnav
