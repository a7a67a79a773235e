#pragma once

#include <cstdint>
#include <string_view>

#include "reachnav/occupancy_map.hpp"

namespace reachnav {

enum class MapKind { kCorridor, kDoorway, kCluttered, kMaze };

MapKind parse_map_kind(std::string_view name);
const char* map_kind_name(MapKind kind);

struct MapGenParams {
  int width = 50;   // cells
  int height = 40;
  double cell_size = 0.1;  // m
  double opening = 0.6;    // doorway gap, corridor and maze passage width (m)
  double robot_diameter = 0.3;
  int obstacles = 6;       // cluttered: number of rectangles
  double obstacle_min = 0.2;  // m, rectangle side range
  double obstacle_max = 0.6;

  void validate() const;
};

// Deterministic for a given (kind, params, seed). Doorway: a two-cell wall
// splits the map into a left (start) and right (goal) region with one gap.
// Throws ValidationError for infeasible parameters.
OccupancyMap generate_map(MapKind kind, const MapGenParams& params,
                          std::uint64_t seed);

// Columns occupied by the doorway wall of a map produced by generate_map.
struct DoorwayLayout {
  int wall_i0 = 0;  // first wall column
  int wall_i1 = 0;  // last wall column
  int gap_j0 = 0;   // first gap row
  int gap_j1 = 0;   // last gap row
};
DoorwayLayout doorway_layout(const MapGenParams& params, std::uint64_t seed);

// 4-connected flood fill over free cells.
bool cells_connected(const OccupancyMap& map, int i0, int j0, int i1, int j1);
// Number of 4-connected free components.
int free_components(const OccupancyMap& map);

}  // namespace reachnav
