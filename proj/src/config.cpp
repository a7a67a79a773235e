#include "reachnav/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "reachnav/hash.hpp"

namespace reachnav {

using nlohmann::json;

namespace {

void allow(const json& j, std::string_view section,
           std::initializer_list<std::string_view> keys) {
  if (!j.is_object())
    throw ValidationError("config: '" + std::string(section) + "' must be an object");
  const std::set<std::string_view> ok(keys);
  for (const auto& [k, v] : j.items())
    if (!ok.count(k))
      throw ValidationError("config: unknown key '" + k + "' in '" +
                            std::string(section) + "'");
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void get_range(const json& j, const char* key, SampleRange& r) {
  if (!j.contains(key)) return;
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 3)
    throw ValidationError(std::string("config: '") + key + "' must be [lo, hi, count]");
  r.lo = a[0].get<double>();
  r.hi = a[1].get<double>();
  r.count = a[2].get<int>();
}

const char* cost_name(CostKind k) {
  return k == CostKind::kHeuristic ? "heuristic" : "reachability";
}
CostKind parse_cost(const std::string& s) {
  if (s == "reachability") return CostKind::kReachability;
  if (s == "heuristic") return CostKind::kHeuristic;
  throw ValidationError("config: unknown cost '" + s + "'");
}
const char* backend_name(SweepBackend b) {
  switch (b) {
    case SweepBackend::kSerial: return "serial";
    case SweepBackend::kParallel: return "parallel";
    default: return "auto";
  }
}
SweepBackend parse_backend(const std::string& s) {
  if (s == "auto") return SweepBackend::kAuto;
  if (s == "serial") return SweepBackend::kSerial;
  if (s == "parallel") return SweepBackend::kParallel;
  throw ValidationError("config: unknown solver backend '" + s + "'");
}
const char* rule_name(TerminalSpeedRule r) {
  return r == TerminalSpeedRule::kKinematic ? "kinematic" : "start_speed";
}
TerminalSpeedRule parse_rule(const std::string& s) {
  if (s == "kinematic") return TerminalSpeedRule::kKinematic;
  if (s == "start_speed") return TerminalSpeedRule::kStartSpeedClamped;
  throw ValidationError("config: unknown terminal_speed rule '" + s + "'");
}

void read_expert(const json& j, ExpertSettings& s) {
  if (j.contains("dynamics")) {
    const json& d = j["dynamics"];
    allow(d, "dynamics", {"v_max", "a_max", "w_max", "d_xy", "d_phi"});
    get(d, "v_max", s.bounds.v_max);
    get(d, "a_max", s.bounds.a_max);
    get(d, "w_max", s.bounds.w_max);
    get(d, "d_xy", s.bounds.d_xy);
    get(d, "d_phi", s.bounds.d_phi);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    allow(g, "grid", {"v_count", "phi_count"});
    get(g, "v_count", s.v_count);
    get(g, "phi_count", s.phi_count);
  }
  if (j.contains("solver")) {
    const json& g = j["solver"];
    allow(g, "solver", {"tolerance", "max_cycles", "ttc_cap", "wall_penalty", "backend"});
    get(g, "tolerance", s.solve.tolerance);
    get(g, "max_cycles", s.solve.max_cycles);
    get(g, "ttc_cap", s.solve.ttc_cap);
    get(g, "wall_penalty", s.solve.wall_penalty);
    s.cost.ttc_cap = s.solve.ttc_cap;
    std::string b = backend_name(s.solve.backend);
    get(g, "backend", b);
    s.solve.backend = parse_backend(b);
  }
  if (j.contains("cost")) {
    const json& c = j["cost"];
    allow(c, "cost", {"alpha", "lambda1", "lambda2"});
    get(c, "alpha", s.cost.alpha);
    get(c, "lambda1", s.cost.lambda1);
    get(c, "lambda2", s.cost.lambda2);
  }
  if (j.contains("planner")) {
    const json& p = j["planner"];
    allow(p, "planner", {"forward", "lateral", "heading", "horizon", "dt",
                         "terminal_speed", "start_speed_floor", "parallel"});
    get_range(p, "forward", s.planner.forward);
    get_range(p, "lateral", s.planner.lateral);
    get_range(p, "heading", s.planner.heading);
    get(p, "horizon", s.planner.horizon);
    get(p, "dt", s.planner.dt);
    s.sim_dt = s.planner.dt;
    std::string rule = rule_name(s.planner.terminal_rule);
    get(p, "terminal_speed", rule);
    s.planner.terminal_rule = parse_rule(rule);
    get(p, "start_speed_floor", s.planner.start_speed_floor);
    get(p, "parallel", s.planner.parallel);
  }
  if (j.contains("tracker")) {
    const json& t = j["tracker"];
    allow(t, "tracker", {"q", "r"});
    if (t.contains("q")) {
      const auto q = t["q"].get<std::vector<double>>();
      if (q.size() != 4) throw ValidationError("config: tracker.q needs 4 entries");
      s.lqr.q = Eigen::Vector4d(q[0], q[1], q[2], q[3]);
    }
    if (t.contains("r")) {
      const auto r = t["r"].get<std::vector<double>>();
      if (r.size() != 2) throw ValidationError("config: tracker.r needs 2 entries");
      s.lqr.r = Eigen::Vector2d(r[0], r[1]);
    }
  }
}

json expert_json(const ExpertSettings& s) {
  auto range = [](const SampleRange& r) { return json::array({r.lo, r.hi, r.count}); };
  return {
      {"dynamics", {{"v_max", s.bounds.v_max}, {"a_max", s.bounds.a_max},
                    {"w_max", s.bounds.w_max}, {"d_xy", s.bounds.d_xy},
                    {"d_phi", s.bounds.d_phi}}},
      {"grid", {{"v_count", s.v_count}, {"phi_count", s.phi_count}}},
      {"solver", {{"tolerance", s.solve.tolerance}, {"max_cycles", s.solve.max_cycles},
                  {"ttc_cap", s.solve.ttc_cap},
                  {"wall_penalty", s.solve.wall_penalty}, {"backend", backend_name(s.solve.backend)}}},
      {"cost", {{"alpha", s.cost.alpha}, {"lambda1", s.cost.lambda1},
                {"lambda2", s.cost.lambda2}}},
      {"planner", {{"forward", range(s.planner.forward)},
                   {"lateral", range(s.planner.lateral)},
                   {"heading", range(s.planner.heading)},
                   {"horizon", s.planner.horizon}, {"dt", s.planner.dt},
                   {"terminal_speed", rule_name(s.planner.terminal_rule)},
                   {"start_speed_floor", s.planner.start_speed_floor},
                   {"parallel", s.planner.parallel}}},
      {"tracker", {{"q", {s.lqr.q[0], s.lqr.q[1], s.lqr.q[2], s.lqr.q[3]}},
                   {"r", {s.lqr.r[0], s.lqr.r[1]}}}},
  };
}

}  // namespace

AppConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  AppConfig c;
  allow(j, "<root>", {"dynamics", "grid", "solver", "cost", "planner", "tracker",
                      "episode", "suite", "methods", "sweep", "dataset",
                      "scenario", "seed", "workers"});
  try {
    read_expert(j, c.bench.expert);
    BenchConfig& b = c.bench;
    if (j.contains("episode")) {
      const json& e = j["episode"];
      allow(e, "episode", {"replan_hz", "timeout", "noise_xy", "noise_theta",
                           "rollout_disturbance"});
      get(e, "replan_hz", b.replan_hz);
      get(e, "timeout", b.timeout);
      get(e, "noise_xy", b.noise_xy);
      get(e, "noise_theta", b.noise_theta);
      get(e, "rollout_disturbance", b.expert.rollout_disturbance);
    }
    if (j.contains("suite")) {
      const json& s = j["suite"];
      allow(s, "suite", {"kind", "maps", "starts_per_map", "seed", "goal_radius",
                         "min_clearance", "map"});
      std::string kind = map_kind_name(b.suite.kind);
      get(s, "kind", kind);
      b.suite.kind = parse_map_kind(kind);
      get(s, "maps", b.suite.maps);
      get(s, "starts_per_map", b.suite.starts_per_map);
      get(s, "seed", b.suite.seed);
      get(s, "goal_radius", b.suite.goal_radius);
      get(s, "min_clearance", b.suite.min_clearance);
      if (s.contains("map")) {
        const json& m = s["map"];
        allow(m, "suite.map", {"width", "height", "cell_size", "opening",
                               "robot_diameter", "obstacles", "obstacle_min",
                               "obstacle_max"});
        MapGenParams& p = b.suite.map;
        get(m, "width", p.width);
        get(m, "height", p.height);
        get(m, "cell_size", p.cell_size);
        get(m, "opening", p.opening);
        get(m, "robot_diameter", p.robot_diameter);
        get(m, "obstacles", p.obstacles);
        get(m, "obstacle_min", p.obstacle_min);
        get(m, "obstacle_max", p.obstacle_max);
      }
    }
    if (j.contains("methods")) {
      const json& ms = j["methods"];
      if (!ms.is_array()) throw ValidationError("config: 'methods' must be an array");
      b.methods.clear();
      for (const json& m : ms) {
        allow(m, "methods[]", {"name", "cost", "disturbance"});
        Method method;
        get(m, "name", method.name);
        std::string cost = "reachability";
        get(m, "cost", cost);
        method.kind = parse_cost(cost);
        get(m, "disturbance", method.disturbance);
        if (method.name.empty()) throw ValidationError("config: method needs a name");
        b.methods.push_back(method);
      }
    }
    get(j, "seed", b.seed);
    get(j, "workers", b.workers);
    if (j.contains("sweep")) {
      allow(j["sweep"], "sweep", {"frequencies"});
      get(j["sweep"], "frequencies", c.sweep_frequencies);
    }
    c.dataset.expert = b.expert;
    c.dataset.seed = b.seed;
    c.dataset.workers = b.workers;
    c.dataset.timeout = b.timeout;
    if (j.contains("dataset")) {
      const json& d = j["dataset"];
      allow(d, "dataset", {"replan_hz", "noise_xy", "noise_theta", "method", "crop"});
      get(d, "replan_hz", c.dataset.replan_hz);
      get(d, "noise_xy", c.dataset.noise_xy);
      get(d, "noise_theta", c.dataset.noise_theta);
      if (d.contains("method")) {
        const json& m = d["method"];
        allow(m, "dataset.method", {"name", "cost", "disturbance"});
        get(m, "name", c.dataset.method.name);
        std::string cost = cost_name(c.dataset.method.kind);
        get(m, "cost", cost);
        c.dataset.method.kind = parse_cost(cost);
        get(m, "disturbance", c.dataset.method.disturbance);
      }
      if (d.contains("crop")) {
        const json& cr = d["crop"];
        allow(cr, "dataset.crop", {"pixels", "forward", "lateral"});
        get(cr, "pixels", c.dataset.crop.pixels);
        get(cr, "forward", c.dataset.crop.forward);
        get(cr, "lateral", c.dataset.crop.lateral);
      }
    }
    if (j.contains("scenario")) {
      const json& s = j["scenario"];
      allow(s, "scenario", {"map_file", "map_kind", "map_seed", "start", "goal",
                            "cost", "disturbance"});
      ScenarioSpec& sc = c.scenario;
      if (s.contains("map_file")) {
        std::filesystem::path p = s["map_file"].get<std::string>();
        sc.map_file = p.is_relative() && !base.empty() ? base / p : p;
      }
      if (s.contains("map_kind")) sc.map_kind = parse_map_kind(s["map_kind"].get<std::string>());
      get(s, "map_seed", sc.map_seed);
      if (s.contains("start")) {
        const auto v = s["start"].get<std::vector<double>>();
        if (v.size() != 4) throw ValidationError("config: scenario.start is [x, y, v, phi]");
        sc.start = VehicleState{v[0], v[1], v[2], v[3]};
      }
      if (s.contains("goal")) {
        const auto v = s["goal"].get<std::vector<double>>();
        if (v.size() != 2 && v.size() != 3)
          throw ValidationError("config: scenario.goal is [x, y] or [x, y, radius]");
        GoalSpec g{v[0], v[1], v.size() == 3 ? v[2] : b.suite.goal_radius};
        sc.goal = g;
      }
      std::string cost = cost_name(sc.cost);
      get(s, "cost", cost);
      sc.cost = parse_cost(cost);
      get(s, "disturbance", sc.disturbance);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.bench.validate();
  c.dataset.validate();
  for (double f : c.sweep_frequencies)
    if (!(f > 0.0)) throw ValidationError("config: sweep frequencies must be > 0");
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_json(const AppConfig& c) {
  const BenchConfig& b = c.bench;
  json j = expert_json(b.expert);
  j["episode"] = {{"replan_hz", b.replan_hz}, {"timeout", b.timeout},
                  {"noise_xy", b.noise_xy}, {"noise_theta", b.noise_theta},
                  {"rollout_disturbance", b.expert.rollout_disturbance}};
  const MapGenParams& p = b.suite.map;
  j["suite"] = {{"kind", map_kind_name(b.suite.kind)}, {"maps", b.suite.maps},
                {"starts_per_map", b.suite.starts_per_map}, {"seed", b.suite.seed},
                {"goal_radius", b.suite.goal_radius},
                {"min_clearance", b.suite.min_clearance},
                {"map", {{"width", p.width}, {"height", p.height},
                         {"cell_size", p.cell_size}, {"opening", p.opening},
                         {"robot_diameter", p.robot_diameter},
                         {"obstacles", p.obstacles}, {"obstacle_min", p.obstacle_min},
                         {"obstacle_max", p.obstacle_max}}}};
  j["methods"] = json::array();
  for (const auto& m : b.methods)
    j["methods"].push_back({{"name", m.name}, {"cost", cost_name(m.kind)},
                            {"disturbance", m.disturbance}});
  j["seed"] = b.seed;
  j["workers"] = b.workers;
  j["sweep"] = {{"frequencies", c.sweep_frequencies}};
  const DatasetConfig& d = c.dataset;
  j["dataset"] = {{"replan_hz", d.replan_hz}, {"noise_xy", d.noise_xy},
                  {"noise_theta", d.noise_theta},
                  {"method", {{"name", d.method.name}, {"cost", cost_name(d.method.kind)},
                              {"disturbance", d.method.disturbance}}},
                  {"crop", {{"pixels", d.crop.pixels}, {"forward", d.crop.forward},
                            {"lateral", d.crop.lateral}}}};
  const ScenarioSpec& s = c.scenario;
  json sc = {{"cost", cost_name(s.cost)}, {"disturbance", s.disturbance},
             {"map_seed", s.map_seed}};
  if (s.map_file) sc["map_file"] = s.map_file->string();
  if (s.map_kind) sc["map_kind"] = map_kind_name(*s.map_kind);
  if (s.start) sc["start"] = {s.start->x, s.start->y, s.start->v, s.start->phi};
  if (s.goal) sc["goal"] = {s.goal->x, s.goal->y, s.goal->radius};
  j["scenario"] = sc;
  return j.dump(2);
}

std::string config_hash(const AppConfig& c) {
  // Worker count does not change any output, so it is left out of the hash.
  AppConfig h = c;
  h.bench.workers = 1;
  h.dataset.workers = 1;
  return Fnv1a().add(std::string_view(config_json(h))).hex();
}

void apply_seed(AppConfig& c, std::uint64_t seed) {
  c.bench.seed = seed;
  c.bench.suite.seed = seed;
  c.dataset.seed = seed;
}

void apply_workers(AppConfig& c, int workers) {
  if (workers < 1) throw ValidationError("--workers must be >= 1");
  c.bench.workers = workers;
  c.dataset.workers = workers;
}

ResolvedScenario resolve_scenario(const AppConfig& c) {
  const ScenarioSpec& s = c.scenario;
  ResolvedScenario r;
  const bool custom_map = s.map_file || s.map_kind;
  if (s.map_file) {
    r.map = read_map(*s.map_file);
  } else if (s.map_kind) {
    r.map = generate_map(*s.map_kind, c.bench.suite.map, s.map_seed);
  }
  if (custom_map && (!s.start || !s.goal))
    throw ValidationError("config: a scenario map needs scenario.start and scenario.goal");
  if (!custom_map || !s.start || !s.goal) {
    SuiteConfig one = c.bench.suite;
    one.maps = 1;
    one.starts_per_map = 1;
    const Task t = make_suite(one).front();
    if (!custom_map) r.map = t.map;
    r.start = t.start;
    r.goal = t.goal;
  }
  if (s.start) r.start = *s.start;
  if (s.goal) r.goal = *s.goal;
  r.goal.validate();
  return r;
}

}  // namespace reachnav
