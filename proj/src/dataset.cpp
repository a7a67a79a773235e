#include "reachnav/dataset.hpp"

#include <cmath>

#include "reachnav/binary_io.hpp"
#include "reachnav/errors.hpp"

namespace reachnav {

namespace {
constexpr char kDatasetMagic[4] = {'R', 'N', 'D', 'S'};
constexpr std::uint32_t kDatasetVersion = 1;

std::size_t crop_bytes(int pixels) {
  return (static_cast<std::size_t>(pixels) * pixels + 7) / 8;
}
}  // namespace

void CropSpec::validate() const {
  if (pixels < 1) throw ValidationError("crop needs at least one pixel");
  if (!(forward > 0.0) || !(lateral > 0.0))
    throw ValidationError("crop window must have positive size");
}

std::vector<std::uint8_t> egocentric_crop(const OccupancyMap& map,
                                          const VehicleState& pose,
                                          const CropSpec& spec) {
  spec.validate();
  const double c = std::cos(pose.phi), s = std::sin(pose.phi);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(spec.pixels) * spec.pixels);
  for (int r = 0; r < spec.pixels; ++r) {
    const double fx = (r + 0.5) * spec.forward / spec.pixels;
    for (int col = 0; col < spec.pixels; ++col) {
      const double ly = 0.5 * spec.lateral - (col + 0.5) * spec.lateral / spec.pixels;
      out[static_cast<std::size_t>(r) * spec.pixels + col] =
          map.occupied_at(pose.x + c * fx - s * ly, pose.y + s * fx + c * ly);
    }
  }
  return out;
}

std::vector<SupervisionRecord> episode_records(const OccupancyMap& map,
                                               const EpisodeResult& result,
                                               std::uint32_t task,
                                               const CropSpec& spec) {
  std::vector<SupervisionRecord> out;
  if (result.outcome != Outcome::kSuccess) return out;
  for (const WaypointRecord& w : result.waypoints) {
    SupervisionRecord rec;
    rec.task = task;
    rec.crop = egocentric_crop(map, w.state, spec);
    rec.v = w.state.v;
    rec.omega = w.omega;
    rec.label = to_egocentric(w.state, w.planned);
    out.push_back(std::move(rec));
  }
  return out;
}

DatasetWriter::DatasetWriter(const std::filesystem::path& path,
                             const CropSpec& spec)
    : spec_(spec) {
  spec.validate();
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw ValidationError("cannot open dataset file " + path.string());
  io::Writer w;
  w.put_bytes(kDatasetMagic, 4);
  w.put(kDatasetVersion);
  w.put(static_cast<std::uint32_t>(spec.pixels));
  w.put(spec.forward);
  w.put(spec.lateral);
  out_.write(reinterpret_cast<const char*>(w.bytes().data()), w.bytes().size());
}

void DatasetWriter::write(const SupervisionRecord& rec) {
  if (rec.crop.size() != static_cast<std::size_t>(spec_.pixels) * spec_.pixels)
    throw ValidationError("record crop size does not match the dataset");
  io::Writer p;
  p.put(rec.task);
  p.put(rec.v);
  p.put(rec.omega);
  p.put(rec.label.x);
  p.put(rec.label.y);
  p.put(rec.label.theta);
  std::vector<std::uint8_t> bits(crop_bytes(spec_.pixels), 0);
  for (std::size_t k = 0; k < rec.crop.size(); ++k)
    if (rec.crop[k]) bits[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
  p.put_bytes(bits.data(), bits.size());
  io::Writer framed;
  framed.put(static_cast<std::uint32_t>(p.bytes().size()));
  framed.put_bytes(p.bytes().data(), p.bytes().size());
  out_.write(reinterpret_cast<const char*>(framed.bytes().data()),
             framed.bytes().size());
  if (!out_) throw std::runtime_error("dataset write failed");
  ++count_;
}

void DatasetWriter::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("dataset write failed");
  out_.close();
}

std::vector<SupervisionRecord> read_dataset(const std::filesystem::path& path,
                                            CropSpec* spec_out) {
  const std::vector<std::uint8_t> bytes = io::read_file(path);
  io::Reader r(bytes);
  char magic[4];
  r.get_bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kDatasetMagic))
    throw ValidationError("not a dataset file (bad magic)");
  if (r.get<std::uint32_t>() != kDatasetVersion)
    throw ValidationError("unsupported dataset version");
  CropSpec spec;
  spec.pixels = static_cast<int>(r.get<std::uint32_t>());
  spec.forward = r.get<double>();
  spec.lateral = r.get<double>();
  spec.validate();
  if (spec_out) *spec_out = spec;
  const std::size_t n_pix = static_cast<std::size_t>(spec.pixels) * spec.pixels;
  const std::size_t expect = 4 + 5 * 8 + crop_bytes(spec.pixels);
  std::vector<SupervisionRecord> out;
  while (!r.done()) {
    const auto len = r.get<std::uint32_t>();
    if (len != expect) throw ValidationError("dataset record has unexpected length");
    SupervisionRecord rec;
    rec.task = r.get<std::uint32_t>();
    rec.v = r.get<double>();
    rec.omega = r.get<double>();
    rec.label.x = r.get<double>();
    rec.label.y = r.get<double>();
    rec.label.theta = r.get<double>();
    rec.label.frame = Frame::kEgocentric;
    std::vector<std::uint8_t> bits(crop_bytes(spec.pixels));
    r.get_bytes(bits.data(), bits.size());
    rec.crop.resize(n_pix);
    for (std::size_t k = 0; k < n_pix; ++k) rec.crop[k] = (bits[k / 8] >> (k % 8)) & 1u;
    out.push_back(std::move(rec));
  }
  return out;
}

void DatasetConfig::validate() const {
  expert.validate();
  crop.validate();
  if (!(replan_hz > 0.0)) throw ValidationError("replan frequency must be > 0");
  if (!(timeout > 0.0)) throw ValidationError("timeout must be > 0");
  if (noise_xy < 0.0 || noise_theta < 0.0)
    throw ValidationError("noise sigma must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

DatasetStats generate_dataset(const std::vector<Task>& tasks,
                              const DatasetConfig& cfg,
                              const std::filesystem::path& path,
                              ValueCache* cache) {
  cfg.validate();
  std::vector<EpisodeResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  const long long n = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
  for (long long t = 0; t < n; ++t) {
    try {
      EpisodeConfig e;
      e.start = tasks[t].start;
      e.goal = tasks[t].goal;
      e.replan_hz = cfg.replan_hz;
      e.timeout = cfg.timeout;
      e.cost_kind = cfg.method.kind;
      e.disturbance = cfg.method.disturbance;
      e.noise_xy = cfg.noise_xy;
      e.noise_theta = cfg.noise_theta;
      e.seed = episode_seed(cfg.seed, tasks[t].index);
      results[t] = run_episode(tasks[t].map, e, cfg.expert, cache);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  DatasetStats stats;
  DatasetWriter writer(path, cfg.crop);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    ++stats.episodes;
    if (results[t].outcome != Outcome::kSuccess) {
      ++stats.failed;
      stats.failed_tasks.push_back(tasks[t].index);
      continue;
    }
    for (const auto& rec : episode_records(tasks[t].map, results[t],
                                           static_cast<std::uint32_t>(tasks[t].index),
                                           cfg.crop))
      writer.write(rec);
  }
  writer.close();
  stats.records = writer.count();
  return stats;
}

}  // namespace reachnav
