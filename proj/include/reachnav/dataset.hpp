#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "reachnav/suite.hpp"

namespace reachnav {

// Egocentric occupancy window ahead of the robot: forward [0, forward] m,
// lateral [-lateral/2, lateral/2] m, sampled at pixel centers. Row r is
// forward distance (r + 0.5) forward / pixels; column c runs left to right,
// lateral offset lateral/2 - (c + 0.5) lateral / pixels. Outside the map
// counts as occupied.
struct CropSpec {
  int pixels = 32;
  double forward = 4.5;
  double lateral = 4.5;
  void validate() const;
};

std::vector<std::uint8_t> egocentric_crop(const OccupancyMap& map,
                                          const VehicleState& pose,
                                          const CropSpec& spec);

struct SupervisionRecord {
  std::uint32_t task = 0;
  std::vector<std::uint8_t> crop;  // pixels x pixels, row-major, 0/1
  double v = 0.0;
  double omega = 0.0;
  Waypoint label;  // egocentric
};

// One record per replan of a successful episode; none otherwise.
std::vector<SupervisionRecord> episode_records(const OccupancyMap& map,
                                               const EpisodeResult& result,
                                               std::uint32_t task,
                                               const CropSpec& spec);

// Dataset file (little-endian):
//   char[4] "RNDS", u32 version (1), u32 pixels, f64 forward, f64 lateral
//   records: u32 payload length, then payload =
//     u32 task, f64 v, f64 omega, f64 x, f64 y, f64 theta,
//     ceil(pixels^2 / 8) bytes of crop bits, LSB-first, row-major
class DatasetWriter {
 public:
  DatasetWriter(const std::filesystem::path& path, const CropSpec& spec);
  void write(const SupervisionRecord& rec);
  std::size_t count() const { return count_; }
  void close();

 private:
  std::ofstream out_;
  CropSpec spec_;
  std::size_t count_ = 0;
};

std::vector<SupervisionRecord> read_dataset(const std::filesystem::path& path,
                                            CropSpec* spec = nullptr);

struct DatasetConfig {
  ExpertSettings expert;
  Method method{"reach_dist", CostKind::kReachability, true};
  double replan_hz = 1.0 / 1.5;
  double timeout = 60.0;
  double noise_xy = 0.0;
  double noise_theta = 0.0;
  std::uint64_t seed = 1;
  int workers = 1;
  CropSpec crop;
  void validate() const;
};

struct DatasetStats {
  std::size_t records = 0;
  std::size_t episodes = 0;
  std::size_t failed = 0;
  std::vector<std::size_t> failed_tasks;
};

// Episodes run on `workers` threads; records are written in task order.
DatasetStats generate_dataset(const std::vector<Task>& tasks,
                              const DatasetConfig& cfg,
                              const std::filesystem::path& path,
                              ValueCache* cache);

}  // namespace reachnav
