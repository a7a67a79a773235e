#include "reachnav/map_gen.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "reachnav/errors.hpp"
#include "reachnav/rng.hpp"

namespace reachnav {

MapKind parse_map_kind(std::string_view name) {
  if (name == "corridor") return MapKind::kCorridor;
  if (name == "doorway") return MapKind::kDoorway;
  if (name == "cluttered") return MapKind::kCluttered;
  if (name == "maze") return MapKind::kMaze;
  throw ValidationError("unknown map kind '" + std::string(name) + "'");
}

const char* map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::kCorridor: return "corridor";
    case MapKind::kDoorway: return "doorway";
    case MapKind::kCluttered: return "cluttered";
    case MapKind::kMaze: return "maze";
  }
  return "?";
}

void MapGenParams::validate() const {
  if (width < 10 || height < 10)
    throw ValidationError("generated maps must be at least 10x10 cells");
  if (!(cell_size > 0.0)) throw ValidationError("cell size must be positive");
  if (!(robot_diameter > 0.0))
    throw ValidationError("robot diameter must be positive");
  if (!(opening > robot_diameter))
    throw ValidationError("opening width must exceed the robot diameter");
  if (obstacles < 0) throw ValidationError("obstacle count must be >= 0");
  if (!(obstacle_min > 0.0) || obstacle_max < obstacle_min)
    throw ValidationError("obstacle size range is invalid");
}

namespace {

int opening_cells(const MapGenParams& p) {
  const int n = static_cast<int>(std::ceil(p.opening / p.cell_size - 1e-9));
  if (n * p.cell_size <= p.robot_diameter)
    throw ValidationError("opening is narrower than the robot at this resolution");
  return n;
}

struct Raster {
  int w, h;
  std::vector<std::uint8_t> c;
  Raster(int w_, int h_, std::uint8_t fill) : w(w_), h(h_), c(w_ * h_, fill) {}
  std::uint8_t& at(int i, int j) { return c[static_cast<std::size_t>(j) * w + i]; }
  void fill(int i0, int j0, int i1, int j1, std::uint8_t v) {
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) at(i, j) = v;
  }
  void border() {
    for (int i = 0; i < w; ++i) at(i, 0) = at(i, h - 1) = 1;
    for (int j = 0; j < h; ++j) at(0, j) = at(w - 1, j) = 1;
  }
  OccupancyMap map(double cell) {
    border();
    return OccupancyMap(w, h, cell, 0.0, 0.0, c);
  }
};

OccupancyMap corridor(const MapGenParams& p, Rng& rng) {
  // A horizontal band joined to a vertical band: an L-shaped corridor.
  const int k = opening_cells(p);
  if (k + 2 > p.height - 2 || k + 2 > p.width - 2)
    throw ValidationError("corridor does not fit the map");
  Raster r(p.width, p.height, 1);
  const int j0 = rng.integer(1, p.height - 1 - k);
  const int i0 = rng.integer(p.width / 2, p.width - 1 - k);
  r.fill(1, j0, i0 + k - 1, j0 + k - 1, 0);
  if (rng.integer(0, 1) == 0)
    r.fill(i0, 1, i0 + k - 1, j0 + k - 1, 0);
  else
    r.fill(i0, j0, i0 + k - 1, p.height - 2, 0);
  return r.map(p.cell_size);
}

OccupancyMap doorway(const MapGenParams& p, std::uint64_t seed) {
  const DoorwayLayout l = doorway_layout(p, seed);
  Raster r(p.width, p.height, 0);
  r.fill(l.wall_i0, 0, l.wall_i1, p.height - 1, 1);
  r.fill(l.wall_i0, l.gap_j0, l.wall_i1, l.gap_j1, 0);
  return r.map(p.cell_size);
}

OccupancyMap cluttered(const MapGenParams& p, Rng& rng) {
  const int lo = std::max(1, static_cast<int>(std::lround(p.obstacle_min / p.cell_size)));
  const int hi = std::max(lo, static_cast<int>(std::lround(p.obstacle_max / p.cell_size)));
  for (int attempt = 0; attempt < 100; ++attempt) {
    Raster r(p.width, p.height, 0);
    // Reserve a one-cell free margin around each rectangle so they stay
    // disjoint and do not touch the border.
    Raster reserved(p.width, p.height, 0);
    reserved.border();
    int placed = 0;
    for (int tries = 0; placed < p.obstacles && tries < 2000; ++tries) {
      const int rw = rng.integer(lo, hi), rh = rng.integer(lo, hi);
      if (rw + 4 > p.width || rh + 4 > p.height) continue;
      const int i0 = rng.integer(2, p.width - 2 - rw);
      const int j0 = rng.integer(2, p.height - 2 - rh);
      bool clash = false;
      for (int j = j0 - 1; j <= j0 + rh && !clash; ++j)
        for (int i = i0 - 1; i <= i0 + rw && !clash; ++i)
          clash = reserved.at(i, j) != 0;
      if (clash) continue;
      r.fill(i0, j0, i0 + rw - 1, j0 + rh - 1, 1);
      reserved.fill(i0 - 1, j0 - 1, i0 + rw, j0 + rh, 1);
      ++placed;
    }
    if (placed < p.obstacles) continue;
    OccupancyMap m = r.map(p.cell_size);
    if (free_components(m) == 1) return m;
  }
  throw ValidationError("could not place the requested obstacles");
}

OccupancyMap maze(const MapGenParams& p, Rng& rng) {
  // Depth-first backtracker on a lattice of k-cell passages with one-cell
  // walls.
  const int k = opening_cells(p);
  const int pitch = k + 1;
  const int mw = (p.width - 1) / pitch, mh = (p.height - 1) / pitch;
  if (mw < 2 || mh < 2) throw ValidationError("maze does not fit the map");
  Raster r(p.width, p.height, 1);
  auto open_room = [&](int a, int b) {
    r.fill(1 + a * pitch, 1 + b * pitch, a * pitch + k, b * pitch + k, 0);
  };
  std::vector<std::uint8_t> seen(mw * mh, 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  seen[0] = 1;
  open_room(0, 0);
  const int da[4] = {1, -1, 0, 0}, db[4] = {0, 0, 1, -1};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    int opts[4], n = 0;
    for (int d = 0; d < 4; ++d) {
      const int na = a + da[d], nb = b + db[d];
      if (na >= 0 && na < mw && nb >= 0 && nb < mh && !seen[nb * mw + na])
        opts[n++] = d;
    }
    if (n == 0) {
      stack.pop_back();
      continue;
    }
    const int d = opts[rng.integer(0, n - 1)];
    const int na = a + da[d], nb = b + db[d];
    seen[nb * mw + na] = 1;
    open_room(na, nb);
    // Knock out the wall between the two rooms.
    const int ia = std::min(a, na), ib = std::min(b, nb);
    if (da[d] != 0)
      r.fill(1 + ia * pitch + k, 1 + b * pitch, 1 + ia * pitch + k, b * pitch + k, 0);
    else
      r.fill(1 + a * pitch, 1 + ib * pitch + k, a * pitch + k, 1 + ib * pitch + k, 0);
    stack.emplace_back(na, nb);
  }
  return r.map(p.cell_size);
}

}  // namespace

DoorwayLayout doorway_layout(const MapGenParams& p, std::uint64_t seed) {
  p.validate();
  const int k = opening_cells(p);
  if (k > p.height - 4) throw ValidationError("doorway gap does not fit the map");
  Rng rng(seed);
  DoorwayLayout l;
  l.wall_i0 = rng.integer(static_cast<int>(0.4 * p.width),
                          static_cast<int>(0.6 * p.width) - 2);
  l.wall_i1 = l.wall_i0 + 1;
  l.gap_j0 = rng.integer(2, p.height - 2 - k);
  l.gap_j1 = l.gap_j0 + k - 1;
  return l;
}

OccupancyMap generate_map(MapKind kind, const MapGenParams& params,
                          std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  switch (kind) {
    case MapKind::kCorridor: return corridor(params, rng);
    case MapKind::kDoorway: return doorway(params, seed);
    case MapKind::kCluttered: return cluttered(params, rng);
    case MapKind::kMaze: return maze(params, rng);
  }
  throw ValidationError("unknown map kind");
}

namespace {
std::vector<int> label_components(const OccupancyMap& m, int& count) {
  const int w = m.width(), h = m.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<int> stack;
  count = 0;
  for (int s = 0; s < w * h; ++s) {
    if (label[s] >= 0 || m.occupied(s % w, s / w)) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % w, j = c / w;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= w || q[1] < 0 || q[1] >= h) continue;
        const int n = q[1] * w + q[0];
        if (label[n] < 0 && !m.occupied(q[0], q[1])) {
          label[n] = count;
          stack.push_back(n);
        }
      }
    }
    ++count;
  }
  return label;
}
}  // namespace

bool cells_connected(const OccupancyMap& map, int i0, int j0, int i1, int j1) {
  if (i0 < 0 || i0 >= map.width() || j0 < 0 || j0 >= map.height() || i1 < 0 ||
      i1 >= map.width() || j1 < 0 || j1 >= map.height())
    throw DomainError("cell index outside map");
  if (map.occupied(i0, j0) || map.occupied(i1, j1)) return false;
  int count = 0;
  const auto label = label_components(map, count);
  return label[j0 * map.width() + i0] == label[j1 * map.width() + i1];
}

int free_components(const OccupancyMap& map) {
  int count = 0;
  label_components(map, count);
  return count;
}

}  // namespace reachnav
