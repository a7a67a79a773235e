#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "reachnav/binary_io.hpp"
#include "reachnav/dataset.hpp"
#include "reachnav/errors.hpp"
#include "reachnav/map_gen.hpp"
#include "reachnav/metrics.hpp"
#include "reachnav/suite.hpp"
#include "reachnav/value_cache.hpp"

using namespace reachnav;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / "reachnav_unit" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Occupied 4-connected components not touching the border, with their cell
// counts and bounding-box areas.
struct Blob {
  int cells = 0;
  int area = 0;
};
std::vector<Blob> interior_blobs(const OccupancyMap& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> label(w * h, -1);
  std::vector<Blob> out;
  for (int j = 1; j < h - 1; ++j)
    for (int i = 1; i < w - 1; ++i) {
      if (!m.occupied(i, j) || label[j * w + i] >= 0) continue;
      std::vector<std::pair<int, int>> stack{{i, j}};
      label[j * w + i] = static_cast<int>(out.size());
      int n = 0, i0 = i, i1 = i, j0 = j, j1 = j;
      bool touches = false;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        ++n;
        i0 = std::min(i0, a), i1 = std::max(i1, a), j0 = std::min(j0, b), j1 = std::max(j1, b);
        for (auto [da, db] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int p = a + da, q = b + db;
          if (p <= 0 || q <= 0 || p >= w - 1 || q >= h - 1) {
            if (m.occupied(p, q)) touches = touches || (p == 0 || q == 0 || p == w - 1 || q == h - 1);
            continue;
          }
          if (m.occupied(p, q) && label[q * w + p] < 0) {
            label[q * w + p] = static_cast<int>(out.size());
            stack.push_back({p, q});
          }
        }
      }
      out.push_back({touches ? -1 : n, (i1 - i0 + 1) * (j1 - j0 + 1)});
    }
  return out;
}

ExpertSettings small_expert() {
  ExpertSettings s;
  s.v_count = 5;
  s.phi_count = 16;
  return s;
}

SuiteConfig small_suite(int maps, int starts) {
  SuiteConfig c;
  c.map.width = 30;
  c.map.height = 24;
  c.maps = maps;
  c.starts_per_map = starts;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("map generation is deterministic") {
  MapGenParams p;
  for (MapKind k : {MapKind::kCorridor, MapKind::kDoorway, MapKind::kCluttered, MapKind::kMaze}) {
    CHECK(encode_map(generate_map(k, p, 7)) == encode_map(generate_map(k, p, 7)));
    CHECK(free_components(generate_map(k, p, 7)) == 1);
  }
  CHECK(encode_map(generate_map(MapKind::kCluttered, p, 7)) !=
        encode_map(generate_map(MapKind::kCluttered, p, 8)));
  CHECK(parse_map_kind("maze") == MapKind::kMaze);
  CHECK(std::string(map_kind_name(MapKind::kDoorway)) == "doorway");
  CHECK_THROWS_AS(parse_map_kind("cave"), ValidationError);
}

TEST_CASE("corridor ends are connected") {
  MapGenParams p;
  const OccupancyMap m = generate_map(MapKind::kCorridor, p, 1);
  int a = -1, b = -1, c = -1, d = -1;
  for (int j = 1; j < m.height() - 1 && a < 0; ++j)
    for (int i = 1; i < m.width() - 1; ++i)
      if (!m.occupied(i, j)) { a = i; b = j; break; }
  for (int j = m.height() - 2; j > 0 && c < 0; --j)
    for (int i = m.width() - 2; i > 0; --i)
      if (!m.occupied(i, j)) { c = i; d = j; break; }
  REQUIRE(a >= 0);
  REQUIRE(c >= 0);
  CHECK(cells_connected(m, a, b, c, d));
}

TEST_CASE("cluttered maps hold exactly the requested disjoint rectangles") {
  MapGenParams p;
  for (int n : {1, 4, 8}) {
    p.obstacles = n;
    const OccupancyMap m = generate_map(MapKind::kCluttered, p, 100 + n);
    const auto blobs = interior_blobs(m);
    CHECK(blobs.size() == static_cast<std::size_t>(n));
    for (const Blob& b : blobs) CHECK(b.cells == b.area);
    CHECK(free_components(m) == 1);
  }
}

TEST_CASE("doorway layout matches the raster") {
  MapGenParams p;
  p.opening = 0.6;
  const OccupancyMap m = generate_map(MapKind::kDoorway, p, 7);
  const DoorwayLayout l = doorway_layout(p, 7);
  CHECK(l.wall_i1 - l.wall_i0 == 1);
  CHECK(l.gap_j1 - l.gap_j0 + 1 == 6);
  for (int j = 1; j < m.height() - 1; ++j) {
    const bool gap = j >= l.gap_j0 && j <= l.gap_j1;
    CHECK(m.occupied(l.wall_i0, j) == !gap);
    CHECK(m.occupied(l.wall_i1, j) == !gap);
  }
}

TEST_CASE("openings no wider than the robot are rejected") {
  MapGenParams p;
  p.opening = 0.3;
  CHECK_THROWS_AS(generate_map(MapKind::kDoorway, p, 1), ValidationError);
  p.opening = 0.25;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = MapGenParams{};
  p.width = 5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("suite construction") {
  const auto tasks = make_suite(small_suite(2, 3));
  REQUIRE(tasks.size() == 6);
  for (const Task& t : tasks) {
    CHECK(t.map.clearance(t.start.x, t.start.y, 1.0) >= 0.3);
    CHECK(t.map.clearance(t.goal.x, t.goal.y, 1.0) >= 0.3);
    CHECK(t.start.v == 0.0);
    CHECK(t.start.x < t.goal.x);
  }
  CHECK(tasks[0].map_seed == tasks[2].map_seed);
  CHECK(tasks[0].map_seed != tasks[3].map_seed);
  const auto again = make_suite(small_suite(2, 3));
  CHECK(again[4].start == tasks[4].start);
}

TEST_CASE("episode starting inside the goal succeeds immediately") {
  const OccupancyMap m = fixture::box(30, 20);
  EpisodeConfig cfg;
  cfg.start = {1.0, 1.0, 0.0, 0.0};
  cfg.goal = {1.1, 1.0, 0.3};
  const EpisodeResult r = run_episode(m, cfg, small_expert());
  CHECK(r.outcome == Outcome::kSuccess);
  CHECK(r.time == 0.0);
  CHECK(r.states.size() == 1);
  CHECK(r.controls.empty());
}

TEST_CASE("episode on an open map reaches a goal 2 m ahead near top speed") {
  const OccupancyMap m = fixture::box(50, 30);
  EpisodeConfig cfg;
  cfg.start = {1.0, 1.5, 0.0, 0.0};
  cfg.goal = {3.0, 1.5, 0.3};
  const ExpertSettings s;
  ValueCache cache;
  const EpisodeResult r = run_episode(m, cfg, s, &cache);
  CHECK(r.outcome == Outcome::kSuccess);
  CHECK(r.time >= 2.0 / s.bounds.v_max);
  CHECK(r.time <= 1.5 * 2.0 / s.bounds.v_max);
  CHECK(r.states.size() == r.controls.size() + 1);
  CHECK(r.waypoints.size() == static_cast<std::size_t>(std::ceil(r.time * cfg.replan_hz - 1e-9)));
  CHECK(r.d_min > 0.3);
}

TEST_CASE("episodes are deterministic and noise is seeded") {
  const auto tasks = make_suite(small_suite(1, 1));
  const Task& t = tasks[0];
  const ExpertSettings s = small_expert();
  ValueCache cache;
  EpisodeConfig cfg;
  cfg.start = t.start;
  cfg.goal = t.goal;
  cfg.noise_xy = 0.1;
  cfg.noise_theta = 0.1;
  cfg.seed = 42;
  cfg.timeout = 20;
  const EpisodeResult a = run_episode(t.map, cfg, s, &cache);
  const EpisodeResult b = run_episode(t.map, cfg, s, &cache);
  CHECK(a.states == b.states);
  CHECK(a.outcome == b.outcome);
  REQUIRE(a.waypoints.size() > 0);
  const auto& w = a.waypoints[0];
  CHECK(std::hypot(w.executed.x - w.planned.x, w.executed.y - w.planned.y) <= 0.3 * std::sqrt(2.0) + 1e-12);
  CHECK(w.executed.x != w.planned.x);
  cfg.seed = 43;
  const EpisodeResult c = run_episode(t.map, cfg, s, &cache);
  CHECK(c.waypoints[0].executed.x != w.executed.x);
  CHECK(cache.solves() == 2);
}

TEST_CASE("episode input validation") {
  const OccupancyMap m = fixture::box(30, 20);
  EpisodeConfig cfg;
  cfg.start = {0.05, 0.05, 0.0, 0.0};
  cfg.goal = {2.0, 1.0, 0.3};
  CHECK_THROWS_AS(run_episode(m, cfg, small_expert()), ValidationError);
  cfg.start = {1.0, 1.0, 0.0, 0.0};
  cfg.replan_hz = 0.0;
  CHECK_THROWS_AS(run_episode(m, cfg, small_expert()), ValidationError);
  ExpertSettings s = small_expert();
  s.sim_dt = 0.1;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  // Goal buried in a wall: the solver cannot seed it.
  cfg.replan_hz = 4.0;
  cfg.goal = {0.05, 1.0, 0.05};
  const EpisodeResult r = run_episode(m, cfg, small_expert());
  CHECK(r.outcome == Outcome::kPlanFailure);
  CHECK_FALSE(r.note.empty());
}

}

TEST_SUITE("metrics") {

TEST_CASE("difficulty thresholds") {
  CHECK(classify_difficulty(0.0) == Difficulty::kHard);
  CHECK(classify_difficulty(0.19999999) == Difficulty::kHard);
  CHECK(classify_difficulty(0.2) == Difficulty::kMedium);
  CHECK(classify_difficulty(0.25) == Difficulty::kMedium);
  CHECK(classify_difficulty(0.3) == Difficulty::kMedium);
  CHECK(classify_difficulty(0.30000001) == Difficulty::kEasy);
  CHECK(std::string(difficulty_name(Difficulty::kMedium)) == "Medium");
}

TEST_CASE("aggregates over successful episodes") {
  auto make = [](Outcome o, double time, double d_min, std::vector<double> accel) {
    EpisodeResult r;
    r.outcome = o;
    r.time = time;
    r.d_min = d_min;
    r.dt = 0.05;
    for (double a : accel) r.controls.push_back({a, 0.0});
    return r;
  };
  const std::vector<EpisodeResult> rs = {
      make(Outcome::kSuccess, 4.0, 0.1, {0.0, 0.0, 0.0}),
      make(Outcome::kSuccess, 6.0, 0.25, {0.2, -0.2, 0.2}),
      make(Outcome::kCollision, 1.0, 0.0, {0.4}),
      make(Outcome::kTimeout, 60.0, 0.5, {0.1, 0.1}),
  };
  const Metrics m = compute_metrics(rs);
  CHECK(m.tasks == 4);
  CHECK(m.successes == 2);
  CHECK(m.success_rate == doctest::Approx(50.0));
  CHECK(m.time.mean == doctest::Approx(5.0));
  CHECK(m.time.std == doctest::Approx(1.0));
  CHECK(m.accel.mean == doctest::Approx(0.1));
  CHECK(m.jerk.mean == doctest::Approx(4.0));
  CHECK(m.hard.count == 2);
  CHECK(m.hard.successes == 1);
  CHECK(m.hard.success_rate == doctest::Approx(50.0));
  CHECK(m.medium.count == 1);
  CHECK(m.medium.success_rate == doctest::Approx(100.0));
  CHECK(m.easy.count == 1);
  CHECK(m.easy.success_rate == doctest::Approx(0.0));
  CHECK_THROWS_AS(compute_metrics({}), ValidationError);
}

TEST_CASE("all successes at constant speed") {
  std::vector<EpisodeResult> rs(3);
  for (auto& r : rs) {
    r.outcome = Outcome::kSuccess;
    r.time = 2.0;
    r.d_min = 0.4;
    r.controls.assign(40, {0.0, 0.3});
  }
  const Metrics m = compute_metrics(rs);
  CHECK(m.success_rate == 100.0);
  CHECK(m.accel.mean == 0.0);
  CHECK(m.jerk.mean == 0.0);
  CHECK(m.time.std == 0.0);
  CHECK(m.easy.count == 3);
}

TEST_CASE("summary statistics use the population deviation") {
  const Stat s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.std == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.n == 4);
  CHECK(summarize({}).n == 0);
}

TEST_CASE("frequency sweep emits one row per frequency and cost") {
  BenchConfig cfg;
  cfg.suite = small_suite(1, 1);
  cfg.expert = small_expert();
  cfg.timeout = 20;
  const auto tasks = make_suite(cfg.suite);
  ValueCache cache;
  const std::vector<double> f{0.67, 1.0, 2.0, 4.0, 6.67};
  const auto rows = sweep_replan_frequency(cfg, tasks, f, &cache);
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(rows[2 * i].replan_hz == f[i]);
    CHECK(rows[2 * i + 1].replan_hz == f[i]);
    CHECK(rows[2 * i].method.kind == CostKind::kReachability);
    CHECK(rows[2 * i].method.disturbance);
    CHECK(rows[2 * i + 1].method.kind == CostKind::kHeuristic);
    CHECK(rows[2 * i].episodes.size() == 1);
  }
  const std::string csv = metrics_csv(rows, "# test");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(csv.find(kMetricsCsvHeader) != std::string::npos);
}

}

TEST_SUITE("dataset") {

TEST_CASE("egocentric crop geometry") {
  std::vector<std::pair<int, int>> block;
  for (int j = 29; j <= 31; ++j)
    for (int i = 39; i <= 41; ++i) block.push_back({i, j});
  const OccupancyMap m = fixture::with_cells(fixture::box(60, 60), block);
  CropSpec spec{8, 2.0, 2.0};
  // Robot at (3.05, 3.05) facing +x: the block spans 0.85..1.15 m ahead.
  const auto crop = egocentric_crop(m, {3.05, 3.05, 0.0, 0.0}, spec);
  REQUIRE(crop.size() == 64);
  int on = 0;
  for (auto c : crop) on += c;
  CHECK(on == 4);
  // Rows 3 and 4 sample 0.875 m and 1.125 m ahead, columns 3 and 4 sample
  // +-0.125 m to the side.
  for (int r = 3; r <= 4; ++r)
    for (int c = 3; c <= 4; ++c) CHECK(crop[r * 8 + c] == 1);
  // Turned around, the window sees open floor.
  const auto side = egocentric_crop(m, {3.05, 3.05, 0.0, std::numbers::pi}, spec);
  int on2 = 0;
  for (auto c : side) on2 += c;
  CHECK(on2 == 0);
  CHECK_THROWS_AS((CropSpec{0, 1.0, 1.0}.validate()), ValidationError);
}

TEST_CASE("records, labels and file round trip") {
  const auto tasks = make_suite(small_suite(1, 1));
  const ExpertSettings s = small_expert();
  ValueCache cache;
  EpisodeConfig cfg;
  cfg.start = tasks[0].start;
  cfg.goal = tasks[0].goal;
  cfg.replan_hz = 1.0;
  const EpisodeResult r = run_episode(tasks[0].map, cfg, s, &cache);
  REQUIRE(r.outcome == Outcome::kSuccess);
  const CropSpec spec;
  const auto recs = episode_records(tasks[0].map, r, 0, spec);
  CHECK(recs.size() == r.waypoints.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Waypoint w = to_world(r.waypoints[i].state, recs[i].label);
    CHECK(std::abs(w.x - r.waypoints[i].planned.x) < 1e-9);
    CHECK(std::abs(w.y - r.waypoints[i].planned.y) < 1e-9);
    CHECK(std::abs(std::remainder(w.theta - r.waypoints[i].planned.theta, 2 * std::numbers::pi)) < 1e-9);
    CHECK(recs[i].v == r.waypoints[i].state.v);
  }
  const fs::path dir = scratch_dir("ds");
  {
    DatasetWriter wr(dir / "a.rnds", spec);
    for (const auto& rec : recs) wr.write(rec);
    CHECK(wr.count() == recs.size());
    wr.close();
  }
  CropSpec back_spec;
  const auto back = read_dataset(dir / "a.rnds", &back_spec);
  REQUIRE(back.size() == recs.size());
  CHECK(back_spec.pixels == spec.pixels);
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].crop == recs[i].crop);
    CHECK(back[i].label.x == recs[i].label.x);
    CHECK(back[i].omega == recs[i].omega);
  }
  EpisodeResult failed = r;
  failed.outcome = Outcome::kCollision;
  CHECK(episode_records(tasks[0].map, failed, 0, spec).empty());
}

TEST_CASE("dataset generation is byte-identical across runs and worker counts") {
  const auto tasks = make_suite(small_suite(1, 2));
  DatasetConfig cfg;
  cfg.expert = small_expert();
  cfg.timeout = 30;
  ValueCache cache;
  const fs::path dir = scratch_dir("gen");
  const DatasetStats a = generate_dataset(tasks, cfg, dir / "a.rnds", &cache);
  cfg.workers = 2;
  const DatasetStats b = generate_dataset(tasks, cfg, dir / "b.rnds", &cache);
  CHECK(a.records == b.records);
  CHECK(a.episodes == 2);
  CHECK(a.records > 0);
  CHECK(io::read_file(dir / "a.rnds") == io::read_file(dir / "b.rnds"));
  CHECK(read_dataset(dir / "a.rnds").size() == a.records);
}

TEST_CASE("corrupt dataset files are rejected") {
  const fs::path dir = scratch_dir("bad");
  io::write_file(dir / "x.rnds", {'R', 'N', 'D', 'X', 1, 0, 0, 0});
  CHECK_THROWS_AS(read_dataset(dir / "x.rnds"), ValidationError);
  {
    DatasetWriter w(dir / "t.rnds", CropSpec{});
    SupervisionRecord rec;
    rec.crop.assign(32 * 32, 1);
    w.write(rec);
    rec.crop.resize(10);
    CHECK_THROWS_AS(w.write(rec), ValidationError);
  }
  auto bytes = io::read_file(dir / "t.rnds");
  bytes.resize(bytes.size() - 3);
  io::write_file(dir / "t.rnds", bytes);
  CHECK_THROWS_AS(read_dataset(dir / "t.rnds"), ValidationError);
}

}

TEST_SUITE("cache") {

TEST_CASE("each key is solved once under contention") {
  ValueCache cache;
  std::atomic<int> calls{0};
  const Grid4D g = fixture::small_grid();
  auto solve = [&] {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    return ValueField(g, std::vector<double>(g.size(), 1.5), FieldKind::kTTR);
  };
  std::vector<std::shared_ptr<const ValueField>> got(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&, t] { got[t] = cache.get(t % 2 ? 11 : 22, solve); });
  for (auto& th : threads) th.join();
  CHECK(calls == 2);
  CHECK(cache.solves() == 2);
  for (int t = 2; t < 8; ++t) CHECK(got[t].get() == got[t % 2].get());
}

TEST_CASE("failed solves propagate and are not cached") {
  ValueCache cache;
  auto bad = []() -> ValueField { throw InfeasibleError("nope"); };
  CHECK_THROWS_AS(cache.get(5, bad), InfeasibleError);
  const Grid4D g = fixture::small_grid();
  auto ok = [&] { return ValueField(g, std::vector<double>(g.size(), 0.0), FieldKind::kTTC); };
  CHECK(cache.get(5, ok)->kind() == FieldKind::kTTC);
}

TEST_CASE("disk cache round trip") {
  const fs::path dir = scratch_dir("cache");
  const Grid4D g = fixture::small_grid();
  std::vector<double> vals(g.size());
  for (std::size_t n = 0; n < vals.size(); ++n) vals[n] = 0.25 * static_cast<double>(n % 9);
  {
    ValueCache c(dir);
    c.get(0xabcdefull, [&] { return ValueField(g, vals, FieldKind::kTTR); });
  }
  CHECK(fs::exists(dir / "0000000000abcdef.vf"));
  ValueCache c2(dir);
  const auto f = c2.get(0xabcdefull, []() -> ValueField { throw std::logic_error("should load"); });
  CHECK(c2.solves() == 0);
  for (std::size_t n = 0; n < vals.size(); ++n) CHECK(f->at(n) == vals[n]);
}

TEST_CASE("cache directory from the environment") {
  ::setenv("REACHNAV_CACHE_DIR", "/tmp/reachnav_env_cache", 1);
  CHECK(ValueCache::dir_from_env(fs::path("x")) == fs::path("/tmp/reachnav_env_cache"));
  ::unsetenv("REACHNAV_CACHE_DIR");
  CHECK(ValueCache::dir_from_env(fs::path("x")) == fs::path("x"));
  CHECK_FALSE(ValueCache::dir_from_env(std::nullopt).has_value());
}

}
