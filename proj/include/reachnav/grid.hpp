#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "reachnav/state.hpp"

namespace reachnav {

inline constexpr double kDefaultUnreachable = 1e6;

enum Dim : int { kX = 0, kY = 1, kV = 2, kPhi = 3 };

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
  bool periodic = false;
};

using Index4 = std::array<int, 4>;
using Vec4 = std::array<double, 4>;

// Regular grid over (x, y, v, phi). Row-major with x fastest.
// Periodic axes exclude the upper endpoint: phi covers [-pi, pi).
class Grid4D {
 public:
  Grid4D() = default;

  const Axis& axis(int d) const { return axes_[d]; }
  int count(int d) const { return axes_[d].count; }
  double spacing(int d) const { return spacing_[d]; }
  std::size_t size() const { return size_; }

  double coord(int d, int i) const { return axes_[d].lo + i * spacing_[d]; }

  std::size_t linear(const Index4& idx) const {
    return static_cast<std::size_t>(idx[0]) +
           stride_[1] * static_cast<std::size_t>(idx[1]) +
           stride_[2] * static_cast<std::size_t>(idx[2]) +
           stride_[3] * static_cast<std::size_t>(idx[3]);
  }
  Index4 unravel(std::size_t n) const;
  std::size_t stride(int d) const { return stride_[d]; }

  // Neighbor index along d at offset +-1, wrapping periodic axes.
  // Returns -1 past a non-periodic boundary.
  int neighbor(int d, int i, int step) const;

  VehicleState node_state(const Index4& idx) const;

  bool operator==(const Grid4D& other) const;

 private:
  friend Grid4D build_grid(const std::array<Axis, 4>&);

  std::array<Axis, 4> axes_{};
  std::array<double, 4> spacing_{};
  std::array<std::size_t, 4> stride_{};
  std::size_t size_ = 0;
};

// Validates and builds a grid. Only phi may be periodic, and it must be,
// covering exactly [-pi, pi). v must start at 0.
Grid4D build_grid(const std::array<Axis, 4>& axes);

enum class FieldKind : std::uint8_t { kTTR = 0, kTTC = 1, kCost = 2 };

// Scalar field on a Grid4D. Immutable once built.
class ValueField {
 public:
  ValueField() = default;
  ValueField(Grid4D grid, std::vector<double> values, FieldKind kind,
             double unreachable = kDefaultUnreachable);

  const Grid4D& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }
  double unreachable() const { return unreachable_; }
  std::span<const double> values() const { return values_; }
  double at(std::size_t n) const { return values_[n]; }
  double at(const Index4& idx) const { return values_[grid_.linear(idx)]; }
  bool is_unreachable(double v) const { return v >= unreachable_; }

 private:
  Grid4D grid_;
  std::vector<double> values_;
  FieldKind kind_ = FieldKind::kCost;
  double unreachable_ = kDefaultUnreachable;
};

// Multilinear interpolation over the 2^4 surrounding nodes. Any node with
// nonzero weight holding the sentinel makes the result the sentinel.
// Throws DomainError if x, y or v is outside the grid.
double interpolate(const ValueField& field, const VehicleState& state);

// Central differences inside, one-sided at non-periodic boundaries and next
// to sentinel nodes, wrapped in phi. Zero along an axis with no usable
// neighbor.
Vec4 gradient(const ValueField& field, const Index4& node);

// Multilinear blend of the node gradients surrounding state.
Vec4 gradient_at(const ValueField& field, const VehicleState& state);

}  // namespace reachnav
