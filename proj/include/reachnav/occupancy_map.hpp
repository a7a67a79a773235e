#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace reachnav {

// 2D occupancy raster. Cell (i, j) spans
// [origin_x + i*cell, origin_x + (i+1)*cell) x [origin_y + j*cell, ...).
// Border cells are always occupied, so every map is a closed world.
class OccupancyMap {
 public:
  OccupancyMap() = default;
  OccupancyMap(int width, int height, double cell_size, double origin_x,
               double origin_y, std::vector<std::uint8_t> occupied);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double extent_x() const { return width_ * cell_size_; }
  double extent_y() const { return height_ * cell_size_; }

  bool occupied(int i, int j) const {
    return cells_[static_cast<std::size_t>(j) * width_ + i] != 0;
  }
  // Points outside the raster count as occupied.
  bool occupied_at(double x, double y) const;
  bool cell_of(double x, double y, int& i, int& j) const;
  double center_x(int i) const { return origin_x_ + (i + 0.5) * cell_size_; }
  double center_y(int j) const { return origin_y_ + (j + 0.5) * cell_size_; }

  const std::vector<std::uint8_t>& cells() const { return cells_; }

  // Distance from (x, y) to the nearest occupied cell square, searched within
  // max_radius; returns max_radius when nothing is closer.
  double clearance(double x, double y, double max_radius) const;

  bool operator==(const OccupancyMap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double cell_size_ = 0.1;
  double origin_x_ = 0.0;
  double origin_y_ = 0.0;
  std::vector<std::uint8_t> cells_;
};

// Text fixture: '#' occupied, '.' free, first line is the top row.
OccupancyMap map_from_ascii(std::string_view text, double cell_size = 0.1,
                            double origin_x = 0.0, double origin_y = 0.0);
std::string map_to_ascii(const OccupancyMap& map);

// Binary map file: "RNMP", u32 version, u32 width, u32 height,
// f64 cell size, f64 origin x, f64 origin y, then occupancy bits packed
// LSB-first in row-major order (x fastest). Little-endian.
std::vector<std::uint8_t> encode_map(const OccupancyMap& map);
OccupancyMap decode_map(const std::vector<std::uint8_t>& bytes);
void write_map(const OccupancyMap& map, const std::filesystem::path& path);
// Reads either the binary format or an ASCII fixture (.txt).
OccupancyMap read_map(const std::filesystem::path& path);

}  // namespace reachnav
