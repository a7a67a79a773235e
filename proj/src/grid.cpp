#include "reachnav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "reachnav/errors.hpp"

namespace reachnav {

namespace {

constexpr const char* kDimNames[4] = {"x", "y", "v", "phi"};

struct AxisWeights {
  int i0, i1;
  double t;  // weight of i1
};

AxisWeights locate(const Grid4D& grid, int d, double s) {
  const Axis& ax = grid.axis(d);
  const double h = grid.spacing(d);
  if (ax.periodic) {
    const double u = (wrap_angle(s) - ax.lo) / h;
    int i0 = static_cast<int>(std::floor(u));
    double t = u - i0;
    i0 = ((i0 % ax.count) + ax.count) % ax.count;
    return {i0, (i0 + 1) % ax.count, t};
  }
  const double tol = 1e-9 * (ax.hi - ax.lo);
  if (!(s >= ax.lo - tol && s <= ax.hi + tol)) {
    std::ostringstream msg;
    msg << "state " << kDimNames[d] << "=" << s << " outside grid ["
        << ax.lo << ", " << ax.hi << "]";
    throw DomainError(msg.str());
  }
  const double u = std::clamp((s - ax.lo) / h, 0.0, double(ax.count - 1));
  const int i0 = std::min(static_cast<int>(std::floor(u)), ax.count - 2);
  return {i0, i0 + 1, u - i0};
}

template <typename Fn>
void for_each_corner(const Grid4D& grid, const VehicleState& s, Fn&& fn) {
  const std::array<AxisWeights, 4> w = {locate(grid, kX, s.x),
                                        locate(grid, kY, s.y),
                                        locate(grid, kV, s.v),
                                        locate(grid, kPhi, s.phi)};
  for (int c = 0; c < 16; ++c) {
    double weight = 1.0;
    Index4 idx;
    for (int d = 0; d < 4; ++d) {
      const bool hi = (c >> d) & 1;
      idx[d] = hi ? w[d].i1 : w[d].i0;
      weight *= hi ? w[d].t : 1.0 - w[d].t;
    }
    if (weight > 0.0) fn(idx, weight);
  }
}

}  // namespace

Index4 Grid4D::unravel(std::size_t n) const {
  Index4 idx;
  for (int d = 0; d < 4; ++d) {
    idx[d] = static_cast<int>(n % axes_[d].count);
    n /= axes_[d].count;
  }
  return idx;
}

int Grid4D::neighbor(int d, int i, int step) const {
  const int j = i + step;
  const int n = axes_[d].count;
  if (axes_[d].periodic) return ((j % n) + n) % n;
  return (j < 0 || j >= n) ? -1 : j;
}

VehicleState Grid4D::node_state(const Index4& idx) const {
  return {coord(kX, idx[0]), coord(kY, idx[1]), coord(kV, idx[2]),
          coord(kPhi, idx[3])};
}

bool Grid4D::operator==(const Grid4D& other) const {
  for (int d = 0; d < 4; ++d) {
    const Axis& a = axes_[d];
    const Axis& b = other.axes_[d];
    if (a.lo != b.lo || a.hi != b.hi || a.count != b.count ||
        a.periodic != b.periodic)
      return false;
  }
  return true;
}

Grid4D build_grid(const std::array<Axis, 4>& axes) {
  Grid4D g;
  std::size_t stride = 1;
  for (int d = 0; d < 4; ++d) {
    const Axis& ax = axes[d];
    const std::string name = kDimNames[d];
    if (ax.count < 2) throw ValidationError(name + ": cell count must be >= 2");
    if (!(ax.hi > ax.lo))
      throw ValidationError(name + ": range must have positive width");
    if (ax.periodic && d != kPhi)
      throw ValidationError(name + ": only the heading axis may be periodic");
    g.axes_[d] = ax;
    g.spacing_[d] = ax.periodic ? (ax.hi - ax.lo) / ax.count
                                : (ax.hi - ax.lo) / (ax.count - 1);
    g.stride_[d] = stride;
    stride *= static_cast<std::size_t>(ax.count);
  }
  const Axis& phi = axes[kPhi];
  if (!phi.periodic) throw ValidationError("phi: heading axis must be periodic");
  if (std::abs(phi.lo + std::numbers::pi) > 1e-12 ||
      std::abs(phi.hi - std::numbers::pi) > 1e-12)
    throw ValidationError("phi: periodic range must be [-pi, pi)");
  if (axes[kV].lo != 0.0) throw ValidationError("v: range must start at 0");
  g.size_ = stride;
  return g;
}

ValueField::ValueField(Grid4D grid, std::vector<double> values, FieldKind kind,
                       double unreachable)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      kind_(kind),
      unreachable_(unreachable) {
  if (values_.size() != grid_.size())
    throw ValidationError("value count does not match grid size");
  if (!(unreachable_ > 0.0))
    throw ValidationError("unreachable sentinel must be positive");
  for (double& v : values_) {
    if (std::isnan(v) || v < 0.0)
      throw ValidationError("field values must be >= 0");
    if (v > unreachable_) v = unreachable_;
  }
}

double interpolate(const ValueField& field, const VehicleState& state) {
  double acc = 0.0;
  bool blocked = false;
  for_each_corner(field.grid(), state, [&](const Index4& idx, double w) {
    const double v = field.at(idx);
    if (field.is_unreachable(v)) blocked = true;
    acc += w * v;
  });
  return blocked ? field.unreachable() : acc;
}

Vec4 gradient(const ValueField& field, const Index4& node) {
  const Grid4D& g = field.grid();
  for (int d = 0; d < 4; ++d)
    if (node[d] < 0 || node[d] >= g.count(d))
      throw DomainError("gradient: node index outside grid");
  Vec4 grad{0, 0, 0, 0};
  const double u0 = field.at(node);
  if (field.is_unreachable(u0)) return grad;
  for (int d = 0; d < 4; ++d) {
    auto value_at = [&](int step, double& out) {
      const int j = g.neighbor(d, node[d], step);
      if (j < 0) return false;
      Index4 nb = node;
      nb[d] = j;
      out = field.at(nb);
      return !field.is_unreachable(out);
    };
    double up = 0.0, um = 0.0;
    const bool has_p = value_at(+1, up);
    const bool has_m = value_at(-1, um);
    const double h = g.spacing(d);
    if (has_p && has_m)
      grad[d] = (up - um) / (2.0 * h);
    else if (has_p)
      grad[d] = (up - u0) / h;
    else if (has_m)
      grad[d] = (u0 - um) / h;
  }
  return grad;
}

Vec4 gradient_at(const ValueField& field, const VehicleState& state) {
  Vec4 acc{0, 0, 0, 0};
  double wsum = 0.0;
  for_each_corner(field.grid(), state, [&](const Index4& idx, double w) {
    if (field.is_unreachable(field.at(idx))) return;
    const Vec4 g = gradient(field, idx);
    for (int d = 0; d < 4; ++d) acc[d] += w * g[d];
    wsum += w;
  });
  if (wsum > 0.0)
    for (double& a : acc) a /= wsum;
  return acc;
}

}  // namespace reachnav
