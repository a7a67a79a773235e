#include "reachnav/occupancy_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "reachnav/binary_io.hpp"
#include "reachnav/errors.hpp"

namespace reachnav {

namespace {

constexpr char kMapMagic[4] = {'R', 'N', 'M', 'P'};
constexpr std::uint32_t kMapVersion = 1;

}  // namespace

OccupancyMap::OccupancyMap(int width, int height, double cell_size,
                           double origin_x, double origin_y,
                           std::vector<std::uint8_t> cells)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      origin_x_(origin_x),
      origin_y_(origin_y),
      cells_(std::move(cells)) {
  if (width_ < 3 || height_ < 3)
    throw ValidationError("map must be at least 3x3 cells");
  if (!(cell_size_ > 0.0)) throw ValidationError("cell size must be positive");
  if (cells_.size() != static_cast<std::size_t>(width_) * height_)
    throw ValidationError("occupancy size does not match map dimensions");
  for (auto& c : cells_) c = c ? 1 : 0;
  for (int i = 0; i < width_; ++i)
    if (!occupied(i, 0) || !occupied(i, height_ - 1))
      throw ValidationError("map border cells must be occupied");
  for (int j = 0; j < height_; ++j)
    if (!occupied(0, j) || !occupied(width_ - 1, j))
      throw ValidationError("map border cells must be occupied");
}

bool OccupancyMap::cell_of(double x, double y, int& i, int& j) const {
  const double fx = std::floor((x - origin_x_) / cell_size_);
  const double fy = std::floor((y - origin_y_) / cell_size_);
  if (!(fx >= 0 && fx < width_ && fy >= 0 && fy < height_)) return false;
  i = static_cast<int>(fx);
  j = static_cast<int>(fy);
  return true;
}

bool OccupancyMap::occupied_at(double x, double y) const {
  int i, j;
  if (!cell_of(x, y, i, j)) return true;
  return occupied(i, j);
}

double OccupancyMap::clearance(double x, double y, double max_radius) const {
  const int r = static_cast<int>(std::ceil(max_radius / cell_size_)) + 1;
  const int ci = static_cast<int>(std::floor((x - origin_x_) / cell_size_));
  const int cj = static_cast<int>(std::floor((y - origin_y_) / cell_size_));
  double best = max_radius;
  for (int j = cj - r; j <= cj + r; ++j) {
    for (int i = ci - r; i <= ci + r; ++i) {
      const bool occ = (i < 0 || j < 0 || i >= width_ || j >= height_)
                           ? true
                           : occupied(i, j);
      if (!occ) continue;
      const double x0 = origin_x_ + i * cell_size_;
      const double y0 = origin_y_ + j * cell_size_;
      const double dx = std::max({x0 - x, 0.0, x - (x0 + cell_size_)});
      const double dy = std::max({y0 - y, 0.0, y - (y0 + cell_size_)});
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

OccupancyMap map_from_ascii(std::string_view text, double cell_size,
                            double origin_x, double origin_y) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw ValidationError("empty ASCII map");
  const int w = static_cast<int>(rows.front().size());
  const int h = static_cast<int>(rows.size());
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    if (static_cast<int>(rows[r].size()) != w)
      throw ValidationError("ASCII map rows must have equal length");
    const int j = h - 1 - r;
    for (int i = 0; i < w; ++i) {
      const char c = rows[r][i];
      if (c != '#' && c != '.')
        throw ValidationError(std::string("unexpected map character '") + c +
                              "'");
      cells[static_cast<std::size_t>(j) * w + i] = c == '#';
    }
  }
  return OccupancyMap(w, h, cell_size, origin_x, origin_y, std::move(cells));
}

std::string map_to_ascii(const OccupancyMap& map) {
  std::string out;
  for (int j = map.height() - 1; j >= 0; --j) {
    for (int i = 0; i < map.width(); ++i) out += map.occupied(i, j) ? '#' : '.';
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> encode_map(const OccupancyMap& map) {
  io::Writer w;
  w.put_bytes(kMapMagic, 4);
  w.put(kMapVersion);
  w.put(static_cast<std::uint32_t>(map.width()));
  w.put(static_cast<std::uint32_t>(map.height()));
  w.put(map.cell_size());
  w.put(map.origin_x());
  w.put(map.origin_y());
  const auto& cells = map.cells();
  std::vector<std::uint8_t> packed((cells.size() + 7) / 8, 0);
  for (std::size_t n = 0; n < cells.size(); ++n)
    if (cells[n]) packed[n / 8] |= static_cast<std::uint8_t>(1u << (n % 8));
  w.put_bytes(packed.data(), packed.size());
  return std::move(w.bytes());
}

OccupancyMap decode_map(const std::vector<std::uint8_t>& bytes) {
  io::Reader r(bytes);
  char magic[4];
  r.get_bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMapMagic))
    throw ValidationError("not a map file (bad magic)");
  if (r.get<std::uint32_t>() != kMapVersion)
    throw ValidationError("unsupported map file version");
  const auto w = r.get<std::uint32_t>();
  const auto h = r.get<std::uint32_t>();
  const double cell = r.get<double>();
  const double ox = r.get<double>();
  const double oy = r.get<double>();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::uint8_t> packed((n + 7) / 8);
  r.get_bytes(packed.data(), packed.size());
  std::vector<std::uint8_t> cells(n);
  for (std::size_t k = 0; k < n; ++k) cells[k] = (packed[k / 8] >> (k % 8)) & 1u;
  return OccupancyMap(static_cast<int>(w), static_cast<int>(h), cell, ox, oy,
                      std::move(cells));
}

void write_map(const OccupancyMap& map, const std::filesystem::path& path) {
  io::write_file(path, encode_map(map));
}

OccupancyMap read_map(const std::filesystem::path& path) {
  if (path.extension() == ".txt") {
    const auto bytes = io::read_file(path);
    return map_from_ascii(std::string(bytes.begin(), bytes.end()));
  }
  return decode_map(io::read_file(path));
}

namespace io {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace io

}  // namespace reachnav
