#pragma once

#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "reachnav/grid.hpp"
#include "reachnav/occupancy_map.hpp"

namespace fixture {

inline reachnav::Grid4D small_grid() {
  using reachnav::Axis;
  return reachnav::build_grid({Axis{0.0, 1.0, 5, false}, Axis{0.0, 2.0, 6, false},
                               Axis{0.0, 0.6, 4, false},
                               Axis{-std::numbers::pi, std::numbers::pi, 8, true}});
}

// Walled box with free interior.
inline reachnav::OccupancyMap box(int w, int h, double cell = 0.1) {
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * h, 0);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i)
      if (i == 0 || j == 0 || i == w - 1 || j == h - 1) cells[j * w + i] = 1;
  return reachnav::OccupancyMap(w, h, cell, 0.0, 0.0, std::move(cells));
}

// Box with `n` random axis-aligned blocks of side 2..side_max cells.
inline reachnav::OccupancyMap blocks(int w, int h, int n, int side_max,
                                     unsigned seed, double cell = 0.1) {
  std::mt19937 rng(seed);
  std::vector<std::uint8_t> cells = box(w, h, cell).cells();
  for (int k = 0; k < n; ++k) {
    const int sw = 2 + static_cast<int>(rng() % (side_max - 1));
    const int sh = 2 + static_cast<int>(rng() % (side_max - 1));
    const int i0 = 1 + static_cast<int>(rng() % (w - sw - 1));
    const int j0 = 1 + static_cast<int>(rng() % (h - sh - 1));
    for (int j = j0; j < j0 + sh; ++j)
      for (int i = i0; i < i0 + sw; ++i) cells[j * w + i] = 1;
  }
  return reachnav::OccupancyMap(w, h, cell, 0.0, 0.0, std::move(cells));
}

inline reachnav::OccupancyMap with_cells(const reachnav::OccupancyMap& m,
                                         const std::vector<std::pair<int, int>>& occ) {
  std::vector<std::uint8_t> cells = m.cells();
  for (auto [i, j] : occ) cells[j * m.width() + i] = 1;
  return reachnav::OccupancyMap(m.width(), m.height(), m.cell_size(), m.origin_x(),
                                m.origin_y(), std::move(cells));
}

}  // namespace fixture
