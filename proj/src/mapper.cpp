#include "vlpslam/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

namespace vlpslam {

GridMapper::GridMapper(const MapperConfig& cfg, double theta0)
    : cfg_(cfg), theta0_(wrap_angle(theta0)) {
  // Private frame: the start pose is the frame origin, grid centered on it.
  const Pose2D origin(-0.5 * cfg.width * cfg.resolution,
                      -0.5 * cfg.height * cfg.resolution, 0.0);
  grid_ = OccupancyGrid(GridGeometry(cfg.width, cfg.height, cfg.resolution, origin),
                        -cfg.l_clamp, cfg.l_clamp);
}

void GridMapper::add_odometry(const OdometrySample& odo) {
  pending_delta_ = compose(pending_delta_, Pose2D(odo.dx, odo.dy, odo.dtheta));
}

Pose2D GridMapper::mapper_pose() const {
  return compose(last_matched_, pending_delta_);
}

double GridMapper::fused_heading() const {
  return wrap_angle(theta0_ + mapper_pose().theta);
}

void GridMapper::add_scan(const LidarScan& scan) {
  const Pose2D prior = mapper_pose();
  Pose2D matched = prior;
  if (field_valid_ && occupied_near(prior) >= cfg_.min_occupied_nearby) {
    matched = match_scan(prior, scan);
  } else if (scans_inserted_ > 0) {
    ++matches_skipped_;
  }
  insert_scan(matched, scan);
  ++scans_inserted_;
  last_matched_ = matched;
  pending_delta_ = Pose2D();
  if (!field_valid_ || ++inserts_since_rebuild_ >= cfg_.field_rebuild_every) {
    rebuild_field();
  }
}

void GridMapper::add_vlp_fix(const VlpFix& fix) {
  if (anchored_ || fix.quality <= cfg_.anchor_quality_min) {
    return;
  }
  // One rigid transform pinning the private frame to the beacon frame:
  // the current mapper pose must land on (fix position, fused heading).
  const Pose2D mp = mapper_pose();
  const double rot = wrap_angle(fused_heading() - mp.theta);
  const Vec2 rotated = rotate({mp.x, mp.y}, rot);
  anchor_ = Transform2D(fix.x - rotated.x, fix.y - rotated.y, rot);
  anchored_ = true;
}

int GridMapper::occupied_near(const Pose2D& pose) const {
  const GridGeometry& g = grid_.geometry();
  const GridIndex lo = g.world_to_cell(
      {pose.x - cfg_.nearby_radius, pose.y - cfg_.nearby_radius});
  const GridIndex hi = g.world_to_cell(
      {pose.x + cfg_.nearby_radius, pose.y + cfg_.nearby_radius});
  int count = 0;
  for (int iy = std::max(lo.iy, 0); iy <= std::min(hi.iy, g.height() - 1); ++iy) {
    for (int ix = std::max(lo.ix, 0); ix <= std::min(hi.ix, g.width() - 1); ++ix) {
      if (grid_.probability({ix, iy}) >= cfg_.occupied_thresh) ++count;
    }
  }
  return count;
}

Pose2D GridMapper::match_scan(const Pose2D& prior, const LidarScan& scan) {
  Pose2D best = prior;
  double best_score = endpoint_score(field_, best, scan, cfg_.match_stride);
  double sl = cfg_.step_linear;
  double sa = cfg_.step_angular;
  int evals = 0;
  for (int h = 0; h <= cfg_.step_halvings; ++h) {
    bool improved = true;
    while (improved && evals < cfg_.max_iterations) {
      improved = false;
      const Pose2D candidates[6] = {
          {best.x + sl, best.y, best.theta}, {best.x - sl, best.y, best.theta},
          {best.x, best.y + sl, best.theta}, {best.x, best.y - sl, best.theta},
          {best.x, best.y, best.theta + sa}, {best.x, best.y, best.theta - sa}};
      for (const Pose2D& c : candidates) {
        const double s = endpoint_score(field_, c, scan, cfg_.match_stride);
        if (s > best_score) {
          best_score = s;
          best = c;
          improved = true;
        }
      }
      ++evals;
    }
    sl *= 0.5;
    sa *= 0.5;
  }
  return best;
}

void GridMapper::insert_scan(const Pose2D& pose, const LidarScan& scan) {
  const GridGeometry& g = grid_.geometry();
  const double res = g.resolution();
  const double relx = pose.x - g.origin().x;
  const double rely = pose.y - g.origin().y;
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const bool hit = scan.valid_range(i);
    const double range = hit ? scan.ranges[i] : scan.max_range;
    const double angle = pose.theta + scan.angle_min + i * scan.angle_increment;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);

    int ix = static_cast<int>(std::floor(relx / res));
    int iy = static_cast<int>(std::floor(rely / res));
    const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
    double t_max_x = step_x != 0
        ? (step_x > 0 ? (ix + 1) * res - relx : relx - ix * res) / std::abs(dx)
        : std::numeric_limits<double>::infinity();
    double t_max_y = step_y != 0
        ? (step_y > 0 ? (iy + 1) * res - rely : rely - iy * res) / std::abs(dy)
        : std::numeric_limits<double>::infinity();
    const double t_delta_x = step_x != 0 ? res / std::abs(dx)
                                         : std::numeric_limits<double>::infinity();
    const double t_delta_y = step_y != 0 ? res / std::abs(dy)
                                         : std::numeric_limits<double>::infinity();

    // Walk cells until the one containing the endpoint; earlier cells are
    // carved free, the endpoint cell reinforced when the beam actually hit.
    while (true) {
      const double crossing = std::min(t_max_x, t_max_y);
      if (crossing >= range) {
        if (g.contains({ix, iy})) {
          grid_.add_log_odds({ix, iy}, hit ? cfg_.l_occ : cfg_.l_free);
        }
        break;
      }
      if (g.contains({ix, iy})) {
        grid_.add_log_odds({ix, iy}, cfg_.l_free);
      }
      if (t_max_x <= t_max_y) {
        ix += step_x;
        t_max_x += t_delta_x;
      } else {
        iy += step_y;
        t_max_y += t_delta_y;
      }
    }
  }
}

void GridMapper::rebuild_field() {
  const GridGeometry& g = grid_.geometry();
  std::vector<bool> occ(static_cast<std::size_t>(g.width()) * g.height());
  for (int iy = 0; iy < g.height(); ++iy) {
    for (int ix = 0; ix < g.width(); ++ix) {
      occ[g.flat({ix, iy})] = grid_.probability({ix, iy}) >= cfg_.occupied_thresh;
    }
  }
  field_ = LikelihoodField(g, occ, cfg_.match_sigma, cfg_.match_max_dist);
  field_valid_ = true;
  inserts_since_rebuild_ = 0;
}

TrinaryGrid GridMapper::export_map() const {
  TrinaryGrid out = binarize(grid_, cfg_.occupied_thresh, cfg_.free_thresh);
  // Re-express only the frame of reference; the cell lattice is not resampled.
  const Transform2D& t = anchored_ ? anchor_ : Transform2D::identity();
  out.set_origin(t.apply(grid_.geometry().origin()));
  return out;
}

MapBuildResult build_map(const SensorLog& log, const LedFeatureMap& led_map,
                         const MapperConfig& cfg, const VlpConfig& vlp_cfg,
                         double theta0) {
  GridMapper mapper(cfg, theta0);
  std::vector<Pose2D> mapper_traj;
  for (const SensorEvent& e : log.events) {
    if (const auto* odo = std::get_if<OdometrySample>(&e)) {
      mapper.add_odometry(*odo);
    } else if (const auto* scan = std::get_if<LidarScan>(&e)) {
      mapper.add_scan(*scan);
      mapper_traj.push_back(mapper.mapper_pose());
    } else if (const auto* cam = std::get_if<CameraFrame>(&e)) {
      const auto fix =
          solve_vlp_fix(*cam, led_map, mapper.fused_heading(), vlp_cfg);
      if (fix) {
        mapper.add_vlp_fix(*fix);
      }
    }
  }
  MapBuildResult result;
  result.map = mapper.export_map();
  result.anchored = mapper.anchored();
  result.anchor = mapper.anchor();
  result.scans_inserted = mapper.scans_inserted();
  const Transform2D t =
      mapper.anchored() ? mapper.anchor() : Transform2D::identity();
  result.trajectory.reserve(mapper_traj.size());
  for (const Pose2D& p : mapper_traj) {
    result.trajectory.push_back(t.apply(p));
  }
  return result;
}

}  // namespace vlpslam
