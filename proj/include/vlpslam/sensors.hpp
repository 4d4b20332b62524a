#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vlpslam/geometry.hpp"

namespace vlpslam {

// Body-frame pose increment accumulated since the previous odometry sample.
struct OdometrySample {
  double t = 0.0;
  std::uint64_t seq = 0;
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

// One 2-D range scan. Beams with no return within max_range report exactly
// max_range and are treated as invalid by consumers.
struct LidarScan {
  double t = 0.0;
  std::uint64_t seq = 0;
  double angle_min = 0.0;
  double angle_increment = 0.0;
  double max_range = 0.0;
  std::vector<double> ranges;

  bool valid_range(std::size_t i) const {
    return ranges[i] > 0.0 && ranges[i] < max_range;
  }
};

// A decoded beacon blob in an image: pixel centroid plus apparent diameter.
struct LedObservation {
  int beacon_id = 0;
  double u = 0.0;
  double v = 0.0;
  double apparent_diameter_px = 0.0;
};

// One camera frame; frames with no decodable beacon are logged too, with an
// empty observation list.
struct CameraFrame {
  double t = 0.0;
  std::uint64_t seq = 0;
  std::vector<LedObservation> observations;
};

struct GroundTruthPose {
  double t = 0.0;
  std::uint64_t seq = 0;
  Pose2D pose;
};

using SensorEvent =
    std::variant<OdometrySample, LidarScan, CameraFrame, GroundTruthPose>;

double event_time(const SensorEvent& e);
std::uint64_t event_seq(const SensorEvent& e);

// Tie-break rank for events with identical timestamps: odometry first, then
// scans, then camera frames, then ground truth. Together with (t, seq) this
// makes the processing order total and reproducible.
int event_source_rank(const SensorEvent& e);

// True iff a sorts strictly before b under (t, rank, seq).
bool event_before(const SensorEvent& a, const SensorEvent& b);

// A complete recorded scenario. Replaying the same log must drive every
// consumer through the exact same state regardless of wall-clock timing,
// so the file round-trip below preserves every double bit-exactly.
struct SensorLog {
  int version = 1;
  std::string scenario;
  std::uint64_t seed = 0;
  double duration = 0.0;
  std::vector<SensorEvent> events;  // sorted by (t, rank, seq)

  void sort_events();
};

void write_sensor_log(const SensorLog& log, const std::string& path);
SensorLog read_sensor_log(const std::string& path);

}  // namespace vlpslam
