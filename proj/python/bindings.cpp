// Python surface: world construction, scripted simulation, estimator replay,
// and global planning. Thin wrappers over the C++ library for scripting and
// notebook use; the CLI remains the full-featured entry point.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "vlpslam/costmap.hpp"
#include "vlpslam/harness.hpp"
#include "vlpslam/planner.hpp"
#include "vlpslam/sim.hpp"

namespace py = pybind11;
using namespace vlpslam;

namespace {

ScenarioScript named_script(const ExperimentConfig& cfg,
                            const std::string& name) {
  ScenarioScript s;
  if (name == "trajectory") {
    s.start = cfg.trajectory.start;
    s.waypoints = cfg.trajectory.waypoints;
    s.cruise_speed = cfg.trajectory.cruise_speed;
    s.duration = cfg.trajectory.duration;
  } else if (name == "mapping") {
    s.start = cfg.mapping.start;
    s.waypoints = cfg.mapping.waypoints;
    s.cruise_speed = cfg.mapping.cruise_speed;
    s.duration = cfg.mapping.duration;
  } else if (name == "recovery") {
    s.start = cfg.recovery.truth_start;
    s.waypoints = cfg.recovery.waypoints;
    s.cruise_speed = 0.2;
    s.duration = cfg.recovery.duration;
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return s;
}

Estimator estimator_by_name(const std::string& name) {
  for (int e = 0; e < kEstimatorCount; ++e) {
    if (name == estimator_name(static_cast<Estimator>(e))) {
      return static_cast<Estimator>(e);
    }
  }
  throw std::invalid_argument(
      "estimator must be fused, vlp_only, mcl_only, or odom_only");
}

}  // namespace

PYBIND11_MODULE(vlpslam, m) {
  m.doc() =
      "LED-beacon positioning fused with lidar particle-filter localization: "
      "simulation, mapping, and navigation testbed";

  py::class_<WorldModel>(m, "World")
      .def_property_readonly("width",
                             [](const WorldModel& w) { return w.bounds_x; })
      .def_property_readonly("height",
                             [](const WorldModel& w) { return w.bounds_y; })
      .def_property_readonly(
          "beacons",
          [](const WorldModel& w) {
            py::list out;
            for (const LedBeacon& b : w.led_map.beacons()) {
              out.append(py::make_tuple(b.id, b.x, b.y, b.z));
            }
            return out;
          })
      .def("occupied",
           [](const WorldModel& w, double x, double y) {
             return w.grid.occupied_at({x, y});
           },
           py::arg("x"), py::arg("y"))
      .def("__repr__", [](const WorldModel& w) {
        return "<World " + std::to_string(w.bounds_x) + "x" +
               std::to_string(w.bounds_y) + " m, " +
               std::to_string(w.led_map.size()) + " beacons>";
      });

  py::class_<SensorLog>(m, "SensorLog")
      .def_property_readonly("scenario",
                             [](const SensorLog& l) { return l.scenario; })
      .def_property_readonly("seed", [](const SensorLog& l) { return l.seed; })
      .def_property_readonly("duration",
                             [](const SensorLog& l) { return l.duration; })
      .def("__len__", [](const SensorLog& l) { return l.events.size(); })
      .def("save",
           [](const SensorLog& l, const std::string& path) {
             write_sensor_log(l, path);
           },
           py::arg("path"))
      .def_static("load", &read_sensor_log, py::arg("path"));

  m.def("lab_world", &make_lab_world,
        "The bundled two-corridor lab world with four ceiling beacons");
  m.def("load_world", &load_world, py::arg("path"));

  m.def(
      "simulate",
      [](const WorldModel& world, const std::string& scenario,
         std::uint64_t seed, double duration) {
        ExperimentConfig cfg = default_experiment();
        ScenarioScript script = named_script(cfg, scenario);
        if (duration > 0.0) script.duration = duration;
        return run_scenario(world, script, cfg.suite, seed, scenario);
      },
      py::arg("world"), py::arg("scenario"), py::arg("seed"),
      py::arg("duration") = -1.0,
      "Record one scripted run (scenario: trajectory | mapping | recovery)");

  m.def(
      "simulate_hold",
      [](const WorldModel& world, double x, double y, double theta,
         std::uint64_t seed, double duration) {
        ExperimentConfig cfg = default_experiment();
        ScenarioScript script;
        script.start = Pose2D(x, y, theta);
        script.cruise_speed = 0.0;
        script.duration = duration;
        return run_scenario(world, script, cfg.suite, seed, "hold");
      },
      py::arg("world"), py::arg("x"), py::arg("y"), py::arg("theta"),
      py::arg("seed"), py::arg("duration") = 3.0,
      "Record a stationary run at the given pose");

  m.def(
      "replay",
      [](const SensorLog& log, const WorldModel& world,
         const std::string& estimator, double guess_x, double guess_y,
         double guess_theta, std::uint64_t seed) {
        const ExperimentConfig cfg = default_experiment();
        const Estimator est = estimator_by_name(estimator);
        const EstimatorRunResult res = replay_log(
            log, world.grid, world.led_map, estimator_config(cfg.stack, est),
            est, Pose2D(guess_x, guess_y, guess_theta), 0.05,
            2.0 * kPi / 180.0, seed);
        std::vector<double> errors;
        for (const SeriesPoint& p : res.series) errors.push_back(p.pos_error);
        const ErrorStats stats = compute_stats(errors);
        py::dict out;
        out["final_pos_error"] = res.final_pos_error;
        out["final_heading_error"] = res.final_heading_error;
        out["mean_pos_error"] = stats.mean;
        out["max_pos_error"] = stats.max;
        out["fixes"] = res.fixes_emitted;
        out["fixes_accepted"] = res.fixes_accepted;
        out["reinits"] = res.reinit_count;
        return out;
      },
      py::arg("log"), py::arg("world"), py::arg("estimator"),
      py::arg("guess_x"), py::arg("guess_y"), py::arg("guess_theta"),
      py::arg("seed"),
      "Feed a recorded log through one estimator configuration and score it "
      "against the embedded ground truth");

  m.def(
      "plan",
      [](const WorldModel& world, double sx, double sy, double gx, double gy) {
        const ExperimentConfig cfg = default_experiment();
        const Costmap costmap = build_costmap(world.grid, cfg.nav.costmap);
        const PlanResult plan = plan_path(costmap, {sx, sy}, {gx, gy},
                                          cfg.nav.planner);
        std::vector<std::pair<double, double>> out;
        if (plan.success) {
          for (const Vec2& p : plan.path) out.emplace_back(p.x, p.y);
        }
        return out;
      },
      py::arg("world"), py::arg("start_x"), py::arg("start_y"),
      py::arg("goal_x"), py::arg("goal_y"),
      "Global A* path on the inflated costmap; empty list when unreachable");
}
