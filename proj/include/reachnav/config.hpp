#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reachnav/dataset.hpp"
#include "reachnav/suite.hpp"

namespace reachnav {

// Single scenario for solve / cost / plan / run / export. Anything left unset
// falls back to the suite's first task.
struct ScenarioSpec {
  std::optional<std::filesystem::path> map_file;
  std::optional<MapKind> map_kind;
  std::uint64_t map_seed = 0;
  std::optional<VehicleState> start;
  std::optional<GoalSpec> goal;
  CostKind cost = CostKind::kReachability;
  bool disturbance = true;
};

struct AppConfig {
  BenchConfig bench;
  std::vector<double> sweep_frequencies{0.67, 1.0, 2.0, 4.0, 6.67};
  DatasetConfig dataset;
  ScenarioSpec scenario;
};

// JSON scenario file. Every key is optional; unknown keys are rejected so
// typos do not silently fall back to defaults. Relative map paths resolve
// against the config file's directory. Throws ValidationError.
AppConfig parse_config(std::string_view json_text,
                       const std::filesystem::path& base_dir = {});
AppConfig load_config(const std::filesystem::path& path);

// Canonical JSON of the effective configuration (all defaults filled in).
std::string config_json(const AppConfig& cfg);
std::string config_hash(const AppConfig& cfg);

// Applies --seed / --workers overrides consistently.
void apply_seed(AppConfig& cfg, std::uint64_t seed);
void apply_workers(AppConfig& cfg, int workers);

struct ResolvedScenario {
  OccupancyMap map;
  VehicleState start;
  GoalSpec goal;
};
ResolvedScenario resolve_scenario(const AppConfig& cfg);

}  // namespace reachnav
