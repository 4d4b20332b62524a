#include "vlpslam/sensors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace vlpslam {

using nlohmann::json;

double event_time(const SensorEvent& e) {
  return std::visit([](const auto& x) { return x.t; }, e);
}

std::uint64_t event_seq(const SensorEvent& e) {
  return std::visit([](const auto& x) { return x.seq; }, e);
}

int event_source_rank(const SensorEvent& e) {
  return static_cast<int>(e.index());
}

bool event_before(const SensorEvent& a, const SensorEvent& b) {
  const double ta = event_time(a);
  const double tb = event_time(b);
  if (ta != tb) return ta < tb;
  const int ra = event_source_rank(a);
  const int rb = event_source_rank(b);
  if (ra != rb) return ra < rb;
  return event_seq(a) < event_seq(b);
}

void SensorLog::sort_events() {
  std::stable_sort(events.begin(), events.end(), event_before);
}

namespace {

json event_to_json(const SensorEvent& e) {
  json j;
  if (const auto* o = std::get_if<OdometrySample>(&e)) {
    j = {{"type", "odom"},   {"t", o->t},   {"seq", o->seq},
         {"dx", o->dx},      {"dy", o->dy}, {"dth", o->dtheta}};
  } else if (const auto* s = std::get_if<LidarScan>(&e)) {
    j = {{"type", "scan"},
         {"t", s->t},
         {"seq", s->seq},
         {"angle_min", s->angle_min},
         {"angle_increment", s->angle_increment},
         {"max_range", s->max_range},
         {"ranges", s->ranges}};
  } else if (const auto* c = std::get_if<CameraFrame>(&e)) {
    json obs = json::array();
    for (const LedObservation& ob : c->observations) {
      obs.push_back({{"id", ob.beacon_id},
                     {"u", ob.u},
                     {"v", ob.v},
                     {"diam", ob.apparent_diameter_px}});
    }
    j = {{"type", "camera"}, {"t", c->t}, {"seq", c->seq}, {"obs", obs}};
  } else {
    const auto& g = std::get<GroundTruthPose>(e);
    j = {{"type", "truth"}, {"t", g.t},          {"seq", g.seq},
         {"x", g.pose.x},   {"y", g.pose.y},     {"th", g.pose.theta}};
  }
  return j;
}

SensorEvent event_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "odom") {
    OdometrySample o;
    o.t = j.at("t").get<double>();
    o.seq = j.at("seq").get<std::uint64_t>();
    o.dx = j.at("dx").get<double>();
    o.dy = j.at("dy").get<double>();
    o.dtheta = j.at("dth").get<double>();
    return o;
  }
  if (type == "scan") {
    LidarScan s;
    s.t = j.at("t").get<double>();
    s.seq = j.at("seq").get<std::uint64_t>();
    s.angle_min = j.at("angle_min").get<double>();
    s.angle_increment = j.at("angle_increment").get<double>();
    s.max_range = j.at("max_range").get<double>();
    s.ranges = j.at("ranges").get<std::vector<double>>();
    return s;
  }
  if (type == "camera") {
    CameraFrame c;
    c.t = j.at("t").get<double>();
    c.seq = j.at("seq").get<std::uint64_t>();
    for (const json& jo : j.at("obs")) {
      c.observations.push_back({jo.at("id").get<int>(), jo.at("u").get<double>(),
                                jo.at("v").get<double>(),
                                jo.at("diam").get<double>()});
    }
    return c;
  }
  if (type == "truth") {
    GroundTruthPose g;
    g.t = j.at("t").get<double>();
    g.seq = j.at("seq").get<std::uint64_t>();
    g.pose = Pose2D(j.at("x").get<double>(), j.at("y").get<double>(),
                    j.at("th").get<double>());
    return g;
  }
  throw std::runtime_error("unknown sensor event type: " + type);
}

}  // namespace

void write_sensor_log(const SensorLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  json header = {{"type", "header"},
                 {"version", log.version},
                 {"scenario", log.scenario},
                 {"seed", log.seed},
                 {"duration", log.duration}};
  out << header.dump() << "\n";
  for (const SensorEvent& e : log.events) {
    out << event_to_json(e).dump() << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed for " + path);
  }
}

SensorLog read_sensor_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  SensorLog log;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      if (have_header) {
        throw std::runtime_error("duplicate header in " + path);
      }
      have_header = true;
      log.version = j.at("version").get<int>();
      log.scenario = j.at("scenario").get<std::string>();
      log.seed = j.at("seed").get<std::uint64_t>();
      log.duration = j.at("duration").get<double>();
      continue;
    }
    log.events.push_back(event_from_json(j));
  }
  if (!have_header) {
    throw std::runtime_error("missing header line in " + path);
  }
  return log;
}

}  // namespace vlpslam
