#include "vlpslam/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vlpslam {

namespace {

constexpr double kDeg = kPi / 180.0;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

// Wrapper enforcing that every provided key is consumed.
class Section {
 public:
  Section() = default;
  Section(const YAML::Node& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsMap()) {
      fail(path_ + " must be a mapping");
    }
  }

  explicit operator bool() const { return static_cast<bool>(node_); }

  template <typename T>
  void get(const std::string& key, T& out) {
    YAML::Node v = take(key);
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail("bad value for " + path_ + key);
    }
  }

  void get_angle_deg(const std::string& key, double& out_rad) {
    double deg = out_rad / kDeg;
    get(key, deg);
    out_rad = deg * kDeg;
  }

  Section child(const std::string& key) {
    YAML::Node v = take(key);
    return v ? Section(v, path_ + key + ".") : Section();
  }

  YAML::Node take(const std::string& key) {
    if (!node_) return YAML::Node(YAML::NodeType::Undefined);
    YAML::Node v = node_[key];
    if (v) seen_.insert(key);
    return v;
  }

  void finish() const {
    if (!node_) return;
    for (const auto& it : node_) {
      const std::string key = it.first.as<std::string>();
      if (!seen_.count(key)) {
        fail("unknown key " + path_ + key);
      }
    }
  }

  const std::string& path() const { return path_; }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec2 parse_vec2(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() != 2) {
    fail(path + " must be [x, y]");
  }
  return {n[0].as<double>(), n[1].as<double>()};
}

Pose2D parse_pose(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() != 3) {
    fail(path + " must be [x, y, heading_deg]");
  }
  return Pose2D(n[0].as<double>(), n[1].as<double>(), n[2].as<double>() * kDeg);
}

std::vector<Vec2> parse_waypoints(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) {
    fail(path + " must be a list of [x, y]");
  }
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    out.push_back(parse_vec2(n[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

DiscObstacle parse_obstacle(const YAML::Node& n, const std::string& path) {
  Section s(n, path + ".");
  DiscObstacle o;
  s.get("radius", o.radius);
  s.get("spawn", o.spawn_time);
  s.get("despawn", o.despawn_time);
  if (YAML::Node sched = s.take("schedule")) {
    if (!sched.IsSequence()) fail(path + ".schedule must be a list of [t, x, y]");
    for (const YAML::Node& e : sched) {
      if (!e.IsSequence() || e.size() != 3) {
        fail(path + ".schedule entries must be [t, x, y]");
      }
      o.schedule.emplace_back(e[0].as<double>(),
                              Vec2{e[1].as<double>(), e[2].as<double>()});
    }
  }
  s.finish();
  if (o.schedule.empty()) fail(path + " needs a schedule");
  return o;
}

void parse_sensors(Section s, SensorSuite& suite) {
  if (!s) return;
  s.get("odom_rate_hz", suite.odom_rate_hz);
  s.get("footprint_radius", suite.footprint_radius);
  if (Section l = s.child("lidar")) {
    l.get("beam_count", suite.lidar.beam_count);
    l.get("max_range", suite.lidar.max_range);
    l.get("range_std", suite.lidar.range_std);
    l.get("rate_hz", suite.lidar.rate_hz);
    l.finish();
  }
  if (Section c = s.child("camera")) {
    c.get("focal_px", suite.camera.focal_px);
    c.get("image_width", suite.camera.image_width);
    c.get("image_height", suite.camera.image_height);
    c.get("height", suite.camera.height);
    c.get("decode_prob", suite.camera.decode_prob);
    c.get("pixel_std", suite.camera.pixel_std);
    c.get("diameter_std", suite.camera.diameter_std);
    c.get("min_apparent_px", suite.camera.min_apparent_px);
    c.get("rate_hz", suite.camera.rate_hz);
    c.finish();
  }
  if (Section n = s.child("odometry_noise")) {
    n.get("a1", suite.odometry_noise.a1);
    n.get("a2", suite.odometry_noise.a2);
    n.get("a3", suite.odometry_noise.a3);
    n.get("a4", suite.odometry_noise.a4);
    n.finish();
  }
  if (Section v = s.child("limits")) {
    v.get("max_v", suite.limits.max_v);
    v.get("max_w", suite.limits.max_w);
    v.finish();
  }
  s.finish();
}

void parse_scenarios(Section s, ExperimentConfig& cfg) {
  if (!s) return;
  if (Section a = s.child("static_accuracy")) {
    a.get("poses", cfg.static_accuracy.poses);
    a.get("seeds", cfg.static_accuracy.seeds);
    a.get("hold_duration", cfg.static_accuracy.hold_duration);
    a.get("init_pos_std", cfg.static_accuracy.init_pos_std);
    a.get_angle_deg("init_theta_std_deg", cfg.static_accuracy.init_theta_std);
    a.get("clearance", cfg.static_accuracy.clearance);
    a.get("sample_seed", cfg.static_accuracy.sample_seed);
    a.finish();
  }
  if (Section t = s.child("trajectory")) {
    if (YAML::Node n = t.take("start"))
      cfg.trajectory.start = parse_pose(n, t.path() + "start");
    if (YAML::Node n = t.take("waypoints"))
      cfg.trajectory.waypoints = parse_waypoints(n, t.path() + "waypoints");
    t.get("cruise_speed", cfg.trajectory.cruise_speed);
    t.get("duration", cfg.trajectory.duration);
    t.get("seeds", cfg.trajectory.seeds);
    t.get("init_pos_std", cfg.trajectory.init_pos_std);
    t.get_angle_deg("init_theta_std_deg", cfg.trajectory.init_theta_std);
    t.get("min_outage_duration", cfg.trajectory.min_outage_duration);
    t.finish();
  }
  if (Section m = s.child("mapping")) {
    if (YAML::Node n = m.take("start"))
      cfg.mapping.start = parse_pose(n, m.path() + "start");
    if (YAML::Node n = m.take("waypoints"))
      cfg.mapping.waypoints = parse_waypoints(n, m.path() + "waypoints");
    m.get("cruise_speed", cfg.mapping.cruise_speed);
    m.get("duration", cfg.mapping.duration);
    m.get_angle_deg("theta0_deg", cfg.mapping.theta0);
    m.finish();
  }
  if (Section r = s.child("recovery")) {
    if (YAML::Node n = r.take("truth_start"))
      cfg.recovery.truth_start = parse_pose(n, r.path() + "truth_start");
    if (YAML::Node n = r.take("wrong_offset"))
      cfg.recovery.wrong_offset = parse_vec2(n, r.path() + "wrong_offset");
    if (YAML::Node n = r.take("waypoints"))
      cfg.recovery.waypoints = parse_waypoints(n, r.path() + "waypoints");
    r.get("duration", cfg.recovery.duration);
    r.get("seeds", cfg.recovery.seeds);
    r.get("init_pos_std", cfg.recovery.init_pos_std);
    r.get_angle_deg("init_theta_std_deg", cfg.recovery.init_theta_std);
    r.finish();
  }
  if (YAML::Node nav = s.take("navigation")) {
    if (!nav.IsSequence()) fail("scenarios.navigation must be a list");
    cfg.navigation.clear();
    int idx = 0;
    for (const YAML::Node& e : nav) {
      const std::string path = "scenarios.navigation[" + std::to_string(idx++) + "]";
      Section es(e, path + ".");
      NavScenarioSpec spec;
      es.get("name", spec.name);
      if (YAML::Node n = es.take("start")) spec.start = parse_pose(n, path + ".start");
      if (YAML::Node n = es.take("goal")) spec.goal = parse_pose(n, path + ".goal");
      if (YAML::Node obs = es.take("obstacles")) {
        if (!obs.IsSequence()) fail(path + ".obstacles must be a list");
        int oi = 0;
        for (const YAML::Node& on : obs) {
          spec.obstacles.push_back(
              parse_obstacle(on, path + ".obstacles[" + std::to_string(oi++) + "]"));
        }
      }
      es.finish();
      if (spec.name.empty()) fail(path + " needs a name");
      cfg.navigation.push_back(std::move(spec));
    }
  }
  s.finish();
}

void overlay(const YAML::Node& root, ExperimentConfig& cfg) {
  Section r(root, "");
  r.get("world", cfg.world_file);
  parse_sensors(r.child("sensors"), cfg.suite);
  if (Section v = r.child("vlp")) {
    v.get("trust_map_height", cfg.stack.vlp.trust_map_height);
    v.get("base_std", cfg.stack.vlp_base_std);
    v.finish();
  }
  if (Section m = r.child("mcl")) {
    m.get("particle_count", cfg.stack.mcl.particle_count);
    m.get("sigma_hit", cfg.stack.mcl.sigma_hit);
    m.get("max_dist", cfg.stack.mcl.max_dist);
    m.get("z_rand", cfg.stack.mcl.z_rand);
    m.get("beam_stride", cfg.stack.mcl.beam_stride);
    m.get("resample_fraction", cfg.stack.mcl.resample_fraction);
    m.get("heading_var_floor", cfg.stack.mcl.heading_var_floor);
    m.get("roughen_pos_std", cfg.stack.mcl.roughen_pos_std);
    m.get("roughen_theta_std", cfg.stack.mcl.roughen_theta_std);
    m.finish();
  }
  if (Section e = r.child("ekf")) {
    e.get("min_increment_std", cfg.stack.ekf.min_increment_std);
    e.finish();
  }
  if (Section st = r.child("stack")) {
    st.get("reorder_delay", cfg.stack.reorder_delay);
    st.get("mcl_meas_pos_std_floor", cfg.stack.mcl_meas_pos_std_floor);
    st.get("watchdog_consecutive", cfg.stack.watchdog_consecutive);
    st.get("reinit_pos_std", cfg.stack.reinit_pos_std);
    st.get("reset_pos_std", cfg.stack.reset_pos_std);
    st.finish();
  }
  if (Section m = r.child("mapper")) {
    m.get("resolution", cfg.mapper.resolution);
    m.get("width", cfg.mapper.width);
    m.get("height", cfg.mapper.height);
    m.get("l_occ", cfg.mapper.l_occ);
    m.get("l_free", cfg.mapper.l_free);
    m.get("l_clamp", cfg.mapper.l_clamp);
    m.get("match_sigma", cfg.mapper.match_sigma);
    m.get("match_max_dist", cfg.mapper.match_max_dist);
    m.get("match_stride", cfg.mapper.match_stride);
    m.get("step_halvings", cfg.mapper.step_halvings);
    m.get("max_iterations", cfg.mapper.max_iterations);
    m.get("min_occupied_nearby", cfg.mapper.min_occupied_nearby);
    m.get("nearby_radius", cfg.mapper.nearby_radius);
    m.get("field_rebuild_every", cfg.mapper.field_rebuild_every);
    m.get("anchor_quality_min", cfg.mapper.anchor_quality_min);
    m.get("occupied_thresh", cfg.mapper.occupied_thresh);
    m.get("free_thresh", cfg.mapper.free_thresh);
    m.get("anchor_enabled", cfg.mapper_anchor_enabled);
    m.finish();
  }
  if (Section n = r.child("nav")) {
    n.get("control_rate_hz", cfg.nav.control_rate_hz);
    n.get("goal_pos_tol", cfg.nav.goal_pos_tol);
    n.get_angle_deg("goal_heading_tol_deg", cfg.nav.goal_heading_tol);
    n.get("replan_after_fallback", cfg.nav.replan_after_fallback);
    n.get("timeout", cfg.nav.timeout);
    n.get("local_window", cfg.nav.local_window);
    n.get("carrot_distance", cfg.nav.carrot_distance);
    n.get("init_pos_std", cfg.nav.init_pos_std);
    n.get("init_theta_std", cfg.nav.init_theta_std);
    if (Section c = n.child("costmap")) {
      c.get("inflation_radius", cfg.nav.costmap.inflation_radius);
      c.get("decay_rate", cfg.nav.costmap.decay_rate);
      c.get("unknown_is_lethal", cfg.nav.costmap.unknown_is_lethal);
      c.finish();
    }
    if (Section p = n.child("planner")) {
      p.get("cost_weight", cfg.nav.planner.cost_weight);
      p.finish();
    }
    if (Section d = n.child("dwa")) {
      d.get("horizon", cfg.nav.dwa.horizon);
      d.get("sim_dt", cfg.nav.dwa.sim_dt);
      d.get("v_samples", cfg.nav.dwa.v_samples);
      d.get("w_samples", cfg.nav.dwa.w_samples);
      d.get("accel_v", cfg.nav.dwa.accel_v);
      d.get("accel_w", cfg.nav.dwa.accel_w);
      d.get("weight_path", cfg.nav.dwa.weight_path);
      d.get("weight_goal", cfg.nav.dwa.weight_goal);
      d.get("weight_clearance", cfg.nav.dwa.weight_clearance);
      d.get("weight_velocity", cfg.nav.dwa.weight_velocity);
      d.get("path_score_cap", cfg.nav.dwa.path_score_cap);
      d.get("clearance_cap", cfg.nav.dwa.clearance_cap);
      d.get("fallback_rotation", cfg.nav.dwa.fallback_rotation);
      d.finish();
    }
    n.finish();
  }
  parse_scenarios(r.child("scenarios"), cfg);
  r.finish();
}

void assign_path(YAML::Node node, const std::vector<std::string>& parts,
                 std::size_t i, const std::string& value) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = YAML::Load(value);
    return;
  }
  YAML::Node child = node[parts[i]];
  assign_path(child, parts, i + 1, value);
}

void apply_override(YAML::Node root, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail("override must look like section.key=value: " + spec);
  }
  std::vector<std::string> parts;
  std::stringstream ss(spec.substr(0, eq));
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) fail("bad override path: " + spec);
    parts.push_back(part);
  }
  assign_path(root, parts, 0, spec.substr(eq + 1));
}

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

}  // namespace

void finalize_config(ExperimentConfig& cfg) {
  CameraModel& cam = cfg.suite.camera;
  cam.cx = 0.5 * cam.image_width;
  cam.cy = 0.5 * cam.image_height;
  // The fix solver describes the same physical camera as the simulator.
  cfg.stack.vlp.focal_px = cam.focal_px;
  cfg.stack.vlp.cx = cam.cx;
  cfg.stack.vlp.cy = cam.cy;
  cfg.stack.vlp.camera_height = cam.height;
  cfg.stack.vlp.min_apparent_px = cam.min_apparent_px;
  // Filters assume the simulator's noise magnitudes.
  cfg.stack.mcl.noise = cfg.suite.odometry_noise;
  cfg.stack.ekf.noise = cfg.suite.odometry_noise;
  // Kinematic limits and footprint flow into the planners.
  cfg.nav.dwa.limits = cfg.suite.limits;
  cfg.nav.dwa.footprint_radius = cfg.suite.footprint_radius;
  cfg.nav.dwa.control_dt = 1.0 / cfg.nav.control_rate_hz;
  cfg.nav.costmap.inscribed_radius = cfg.suite.footprint_radius;

  require(cfg.suite.odom_rate_hz > 0 && cfg.suite.lidar.rate_hz > 0 &&
              cfg.suite.camera.rate_hz > 0 && cfg.nav.control_rate_hz > 0,
          "all rates must be positive");
  require(cfg.suite.lidar.beam_count > 0, "lidar.beam_count must be positive");
  require(cfg.suite.lidar.max_range > 0, "lidar.max_range must be positive");
  require(cam.focal_px > 0 && cam.image_width > 0 && cam.image_height > 0,
          "camera intrinsics must be positive");
  require(cam.decode_prob >= 0.0 && cam.decode_prob <= 1.0,
          "camera.decode_prob must be within [0, 1]");
  require(cfg.stack.mcl.particle_count > 0, "mcl.particle_count must be positive");
  require(cfg.stack.mcl.z_rand >= 0.0 && cfg.stack.mcl.z_rand < 1.0,
          "mcl.z_rand must be within [0, 1)");
  require(cfg.stack.mcl.beam_stride >= 1, "mcl.beam_stride must be >= 1");
  require(cfg.stack.mcl.sigma_hit > 0 && cfg.stack.mcl.max_dist > 0,
          "mcl field parameters must be positive");
  require(cfg.stack.mcl.roughen_pos_std >= 0.0 &&
              cfg.stack.mcl.roughen_theta_std >= 0.0,
          "mcl roughening stds must be non-negative");
  require(cfg.stack.watchdog_consecutive >= 1,
          "stack.watchdog_consecutive must be >= 1");
  require(cfg.mapper.free_thresh > 0 && cfg.mapper.occupied_thresh < 1 &&
              cfg.mapper.free_thresh < cfg.mapper.occupied_thresh,
          "mapper thresholds must satisfy 0 < free < occupied < 1");
  require(cfg.mapper.l_clamp > 0 && cfg.mapper.l_occ > 0 && cfg.mapper.l_free < 0,
          "mapper log-odds increments must move in opposite directions");
  require(cfg.suite.limits.max_v > 0 && cfg.suite.limits.max_w > 0,
          "velocity limits must be positive");
  require(cfg.suite.footprint_radius > 0, "footprint radius must be positive");
  require(cfg.nav.dwa.v_samples >= 1 && cfg.nav.dwa.w_samples >= 1,
          "dwa sample counts must be >= 1");
  require(cfg.static_accuracy.poses > 0 && cfg.static_accuracy.seeds > 0,
          "static_accuracy needs poses and seeds");
  require(cfg.trajectory.seeds > 0 && cfg.recovery.seeds > 0,
          "trajectory and recovery need at least one seed");
}

ExperimentConfig default_experiment() {
  ExperimentConfig cfg;

  cfg.trajectory.start = Pose2D(0.4, 3.4, 0.0);
  cfg.trajectory.waypoints = {
      {8.4, 3.4}, {8.9, 2.6}, {5.9, 0.4},  {0.0, 0.0},  {-0.4, 3.4},
      {-0.4, 8.3}, {2.4, 9.2}, {6.9, 8.2}, {9.7, 8.3},  {10.3, 5.4},
      {5.6, 5.2},  {3.6, 4.9}};
  cfg.trajectory.duration = 236.0;

  cfg.mapping.start = Pose2D(3.0, 2.0, 0.0);
  cfg.mapping.waypoints = {{5.2, 2.0}, {6.5, 1.0}, {8.9, 2.6},
                           {8.4, 3.4}, {4.8, 4.2}, {1.6, 3.4}};
  cfg.mapping.duration = 78.0;

  cfg.recovery.truth_start = Pose2D(1.8, 7.0, 0.0);
  cfg.recovery.wrong_offset = {0.0, -5.0};
  cfg.recovery.waypoints = {{5.7, 7.0}, {7.3, 7.8}, {8.6, 7.9}};
  cfg.recovery.duration = 40.0;

  auto nav = [&](const std::string& name, const Pose2D& start, const Pose2D& goal,
                 std::vector<DiscObstacle> obstacles = {}) {
    NavScenarioSpec s;
    s.name = name;
    s.start = start;
    s.goal = goal;
    s.obstacles = std::move(obstacles);
    cfg.navigation.push_back(std::move(s));
  };
  const double d90 = 0.5 * kPi;
  nav("nav01_south_hall", Pose2D(0.0, 0.0, 0.0), Pose2D(4.0, 0.6, 0.0));
  nav("nav02_corridor_exit", Pose2D(3.0, 2.0, 0.0), Pose2D(8.9, 2.6, d90));
  nav("nav03_west_passage", Pose2D(0.0, 0.0, d90), Pose2D(2.4, 9.2, kPi));
  nav("nav04_east_side", Pose2D(8.4, 3.4, d90), Pose2D(9.7, 8.3, d90));
  nav("nav05_north_corridor", Pose2D(3.0, 7.0, 0.0), Pose2D(7.0, 8.6, 0.0));
  nav("nav06_center_to_origin", Pose2D(4.8, 4.6, kPi), Pose2D(0.0, 0.6, kPi));
  nav("nav07_long_diagonal", Pose2D(9.7, 8.3, -0.75 * kPi), Pose2D(3.0, 2.0, kPi));

  DiscObstacle crossing;
  crossing.radius = 0.18;
  crossing.spawn_time = 8.0;
  crossing.despawn_time = 60.0;
  crossing.schedule = {{8.0, {5.0, 4.6}},
                       {16.0, {5.0, 3.0}},
                       {24.0, {5.0, 4.6}},
                       {32.0, {5.0, 3.0}}};
  nav("nav08_dynamic_crossing", Pose2D(0.4, 3.4, 0.0), Pose2D(8.4, 3.4, 0.0),
      {crossing});

  DiscObstacle patrol;
  patrol.radius = 0.18;
  patrol.spawn_time = 6.0;
  patrol.despawn_time = 60.0;
  patrol.schedule = {{6.0, {4.5, 0.6}},
                     {14.0, {4.5, 1.2}},
                     {22.0, {4.5, 0.6}},
                     {30.0, {4.5, 1.2}}};
  nav("nav09_dynamic_patrol", Pose2D(0.0, 0.0, 0.0), Pose2D(8.9, 2.6, 0.0),
      {patrol});

  DiscObstacle drifter;
  drifter.radius = 0.15;
  drifter.spawn_time = 5.0;
  drifter.despawn_time = 60.0;
  drifter.schedule = {{5.0, {6.9, 8.6}}, {15.0, {6.9, 9.3}}, {25.0, {6.9, 8.6}}};
  nav("nav10_dynamic_north", Pose2D(2.4, 9.2, 0.0), Pose2D(9.7, 8.3, -d90),
      {drifter});

  finalize_config(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    fail("cannot load " + path + ": " + e.what());
  }
  for (const std::string& o : overrides) {
    apply_override(root, o);
  }
  ExperimentConfig cfg = default_experiment();
  overlay(root, cfg);
  finalize_config(cfg);
  return cfg;
}

ExperimentConfig load_experiment_overrides(const std::vector<std::string>& overrides) {
  YAML::Node root(YAML::NodeType::Map);
  for (const std::string& o : overrides) {
    apply_override(root, o);
  }
  ExperimentConfig cfg = default_experiment();
  overlay(root, cfg);
  finalize_config(cfg);
  return cfg;
}

}  // namespace vlpslam
