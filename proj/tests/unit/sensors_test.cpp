#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "vlpslam/reorder.hpp"
#include "vlpslam/rng.hpp"
#include "vlpslam/sensors.hpp"

using namespace vlpslam;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

OdometrySample odo(double t, std::uint64_t seq) {
  OdometrySample s;
  s.t = t;
  s.seq = seq;
  return s;
}

LidarScan scan(double t, std::uint64_t seq) {
  LidarScan s;
  s.t = t;
  s.seq = seq;
  s.max_range = 3.5;
  return s;
}

CameraFrame cam(double t, std::uint64_t seq) {
  CameraFrame f;
  f.t = t;
  f.seq = seq;
  return f;
}

}  // namespace

TEST_CASE("event ordering is total: time, then source, then seq") {
  CHECK(event_before(odo(1.0, 0), scan(2.0, 0)));
  CHECK(!event_before(scan(2.0, 0), odo(1.0, 0)));
  // equal times: odometry outranks scans outranks camera
  CHECK(event_before(odo(1.0, 5), scan(1.0, 0)));
  CHECK(event_before(scan(1.0, 5), cam(1.0, 0)));
  CHECK(event_before(odo(1.0, 5), cam(1.0, 0)));
  // same time and source: sequence number decides
  CHECK(event_before(odo(1.0, 1), odo(1.0, 2)));
  CHECK(!event_before(odo(1.0, 2), odo(1.0, 1)));
  // nothing sorts before itself
  CHECK(!event_before(odo(1.0, 1), odo(1.0, 1)));
}

TEST_CASE("valid_range excludes zero and the no-return marker") {
  LidarScan s = scan(0.0, 0);
  s.ranges = {0.0, 1.2, 3.5, 3.499, 1e-4};
  CHECK(!s.valid_range(0));
  CHECK(s.valid_range(1));
  CHECK(!s.valid_range(2));  // exactly max_range means no return
  CHECK(s.valid_range(3));
  CHECK(s.valid_range(4));
}

TEST_CASE("log file round trip preserves every bit") {
  SensorLog log;
  log.scenario = "roundtrip";
  log.seed = 0xDEADBEEFCAFEull;
  log.duration = 2.5;

  // deliberately awkward doubles: long fractions, denormal-ish, negatives
  Rng rng(123);
  OdometrySample o;
  o.t = 1.0 / 3.0;
  o.seq = 7;
  o.dx = 0.1 + 1e-17;
  o.dy = -2.0 / 7.0;
  o.dtheta = std::nextafter(0.0, 1.0) * 100;
  log.events.push_back(o);

  LidarScan s = scan(0.5, 3);
  s.angle_min = 0.0;
  s.angle_increment = 2.0 * kPi / 360.0;
  for (int i = 0; i < 360; ++i) {
    s.ranges.push_back(i % 5 == 0 ? 3.5 : rng.uniform(0.01, 3.49));
  }
  log.events.push_back(s);

  CameraFrame f = cam(2.0 / 3.0, 1);
  f.observations.push_back({3, 1023.4567891234567, 768.00000000001, 41.9999999});
  log.events.push_back(f);

  GroundTruthPose g;
  g.t = 0.25;
  g.seq = 0;
  g.pose = Pose2D(1.2345678901234567, -0.000001234, 3.14159);
  log.events.push_back(g);

  log.sort_events();
  const std::string path = temp_path("log_roundtrip.jsonl");
  write_sensor_log(log, path);
  const SensorLog back = read_sensor_log(path);

  CHECK(back.scenario == log.scenario);
  CHECK(back.seed == log.seed);
  CHECK(back.duration == log.duration);
  REQUIRE(back.events.size() == log.events.size());
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    CHECK(event_time(back.events[i]) == event_time(log.events[i]));
    CHECK(event_seq(back.events[i]) == event_seq(log.events[i]));
    CHECK(back.events[i].index() == log.events[i].index());
  }

  const auto& so = std::get<OdometrySample>(back.events[1]);
  CHECK(std::memcmp(&so.dx, &o.dx, sizeof(double)) == 0);
  CHECK(std::memcmp(&so.dy, &o.dy, sizeof(double)) == 0);
  CHECK(std::memcmp(&so.dtheta, &o.dtheta, sizeof(double)) == 0);

  const auto& ss = std::get<LidarScan>(back.events[2]);
  REQUIRE(ss.ranges.size() == s.ranges.size());
  CHECK(std::memcmp(ss.ranges.data(), s.ranges.data(),
                    s.ranges.size() * sizeof(double)) == 0);

  const auto& sf = std::get<CameraFrame>(back.events[3]);
  REQUIRE(sf.observations.size() == 1);
  CHECK(sf.observations[0].beacon_id == 3);
  CHECK(sf.observations[0].u == f.observations[0].u);
  CHECK(sf.observations[0].v == f.observations[0].v);
  CHECK(sf.observations[0].apparent_diameter_px ==
        f.observations[0].apparent_diameter_px);

  const auto& sg = std::get<GroundTruthPose>(back.events[0]);
  CHECK(sg.pose.x == g.pose.x);
  CHECK(sg.pose.y == g.pose.y);
  CHECK(sg.pose.theta == g.pose.theta);

  // writing the reloaded log reproduces the file byte for byte
  const std::string path2 = temp_path("log_roundtrip2.jsonl");
  write_sensor_log(back, path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  CHECK(!b1.empty());

  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("reorder buffer releases by watermark in processing order") {
  ReorderBuffer buf(0.150);
  buf.push(odo(0.00, 0));
  buf.push(odo(0.05, 1));
  CHECK(buf.release().empty());  // watermark still behind

  buf.push(scan(0.30, 0));
  auto out = buf.release();
  REQUIRE(out.size() == 2);
  CHECK(event_time(out[0]) == 0.00);
  CHECK(event_time(out[1]) == 0.05);
  CHECK(buf.pending() == 1);

  auto rest = buf.flush();
  REQUIRE(rest.size() == 1);
  CHECK(event_time(rest[0]) == 0.30);
  CHECK(buf.pending() == 0);
}

TEST_CASE("reorder buffer is insensitive to arrival order within the window") {
  std::vector<SensorEvent> events;
  for (int i = 0; i < 40; ++i) {
    const double t = 0.05 * i;
    events.push_back(odo(t, static_cast<std::uint64_t>(i)));
    if (i % 4 == 0) events.push_back(scan(t, static_cast<std::uint64_t>(i / 4)));
  }

  auto drain = [](const std::vector<SensorEvent>& arrival) {
    ReorderBuffer buf(0.150);
    std::vector<SensorEvent> processed;
    for (const SensorEvent& e : arrival) {
      buf.push(e);
      for (SensorEvent& r : buf.release()) processed.push_back(std::move(r));
    }
    for (SensorEvent& r : buf.flush()) processed.push_back(std::move(r));
    return processed;
  };

  const std::vector<SensorEvent> in_order = drain(events);

  // swap adjacent pairs (each displacement well inside the delay window)
  std::vector<SensorEvent> swapped = events;
  for (std::size_t i = 0; i + 1 < swapped.size(); i += 2) {
    std::swap(swapped[i], swapped[i + 1]);
  }
  const std::vector<SensorEvent> out = drain(swapped);

  REQUIRE(out.size() == in_order.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].index() == in_order[i].index());
    CHECK(event_time(out[i]) == event_time(in_order[i]));
    CHECK(event_seq(out[i]) == event_seq(in_order[i]));
  }
}
