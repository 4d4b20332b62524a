#include "vlpslam/mcl.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vlpslam {

std::vector<int> systematic_resample(const std::vector<double>& weights,
                                     int n_out, double u01) {
  const int n = static_cast<int>(weights.size());
  assert(n > 0 && n_out > 0 && u01 >= 0.0 && u01 < 1.0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  assert(total > 0.0);
  std::vector<int> out;
  out.reserve(n_out);
  const double step = total / n_out;
  double pointer = u01 * step;
  double cum = weights[0];
  int i = 0;
  for (int k = 0; k < n_out; ++k) {
    while (pointer > cum && i + 1 < n) {
      cum += weights[++i];
    }
    out.push_back(i);
    pointer += step;
  }
  return out;
}

MclFilter::MclFilter(const TrinaryGrid& map, const MclConfig& cfg,
                     std::uint64_t seed)
    : map_(map),
      field_(map, cfg.sigma_hit, cfg.max_dist),
      cfg_(cfg),
      rng_(Rng::derive(seed, 17)) {
  if (cfg.particle_count <= 0) {
    throw std::invalid_argument("particle count must be positive");
  }
  particles_.resize(cfg.particle_count);
  const double w = 1.0 / cfg.particle_count;
  for (Particle& p : particles_) p.weight = w;
}

void MclFilter::init_gaussian(const Pose2D& mean, double pos_std,
                              double theta_std) {
  const double w = 1.0 / particles_.size();
  for (Particle& p : particles_) {
    p.pose = Pose2D(rng_.gaussian(mean.x, pos_std),
                    rng_.gaussian(mean.y, pos_std),
                    rng_.gaussian(mean.theta, theta_std));
    p.weight = w;
  }
}

void MclFilter::init_boxes(const std::vector<PoseBox>& boxes) {
  if (boxes.empty()) {
    throw std::invalid_argument("init_boxes needs at least one box");
  }
  std::vector<double> volume(boxes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const PoseBox& b = boxes[i];
    volume[i] = std::max(b.x1 - b.x0, 1e-9) * std::max(b.y1 - b.y0, 1e-9) *
                std::max(b.theta1 - b.theta0, 1e-9);
    total += volume[i];
  }
  const double w = 1.0 / particles_.size();
  for (Particle& p : particles_) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      double pick = rng_.uniform(0.0, total);
      std::size_t bi = 0;
      while (bi + 1 < boxes.size() && pick > volume[bi]) {
        pick -= volume[bi];
        ++bi;
      }
      const PoseBox& b = boxes[bi];
      const Vec2 pos{rng_.uniform(b.x0, b.x1), rng_.uniform(b.y0, b.y1)};
      if (map_.occupied_at(pos)) continue;
      p.pose = Pose2D(pos.x, pos.y, rng_.uniform(b.theta0, b.theta1));
      break;
    }
    p.weight = w;
  }
}

void MclFilter::reinit_position(const Vec2& p, double pos_std) {
  const double w = 1.0 / particles_.size();
  for (Particle& pt : particles_) {
    pt.pose = Pose2D(rng_.gaussian(p.x, pos_std), rng_.gaussian(p.y, pos_std),
                     pt.pose.theta);
    pt.weight = w;
  }
}

void MclFilter::predict(const OdometrySample& odo) {
  const Pose2D delta(odo.dx, odo.dy, odo.dtheta);
  const MotionDecomposition m = decompose_motion(Pose2D(), delta);
  const double std_r1 =
      cfg_.noise.a1 * std::abs(m.rot1) + cfg_.noise.a2 * m.trans;
  const double std_tr = cfg_.noise.a3 * m.trans +
                        cfg_.noise.a4 * (std::abs(m.rot1) + std::abs(m.rot2));
  const double std_r2 =
      cfg_.noise.a1 * std::abs(m.rot2) + cfg_.noise.a2 * m.trans;
  for (Particle& p : particles_) {
    const double r1 = m.rot1 + std_r1 * rng_.gaussian();
    const double tr = m.trans + std_tr * rng_.gaussian();
    const double r2 = m.rot2 + std_r2 * rng_.gaussian();
    p.pose = compose(p.pose, Pose2D(tr * std::cos(r1), tr * std::sin(r1),
                                    wrap_angle(r1 + r2)));
    // Always six draws per particle, so replay determinism cannot depend on
    // the motion content.
    const double jx = cfg_.roughen_pos_std * rng_.gaussian();
    const double jy = cfg_.roughen_pos_std * rng_.gaussian();
    const double jth = cfg_.roughen_theta_std * rng_.gaussian();
    p.pose = Pose2D(p.pose.x + jx, p.pose.y + jy,
                    wrap_angle(p.pose.theta + jth));
  }
}

void MclFilter::correct(const LidarScan& scan) {
  for (Particle& p : particles_) {
    p.weight *= scan_likelihood(field_, p.pose, scan, cfg_.beam_stride,
                                cfg_.z_rand);
  }
  normalize();
  if (ess() < cfg_.resample_fraction * particles_.size()) {
    std::vector<double> w(particles_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = particles_[i].weight;
    const std::vector<int> idx = systematic_resample(
        w, static_cast<int>(particles_.size()), rng_.uniform01());
    std::vector<Particle> next(particles_.size());
    const double uniform = 1.0 / particles_.size();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      next[i].pose = particles_[idx[i]].pose;
      next[i].weight = uniform;
    }
    particles_ = std::move(next);
    ++resample_count_;
  }
}

void MclFilter::normalize() {
  double sum = 0.0;
  for (const Particle& p : particles_) sum += p.weight;
  // The z_rand floor in the beam mixture keeps every weight strictly
  // positive, so the sum cannot underflow to zero.
  assert(sum > 0.0);
  const double inv = 1.0 / sum;
  for (Particle& p : particles_) p.weight *= inv;
}

double MclFilter::ess() const {
  double sum = 0.0, sum_sq = 0.0;
  for (const Particle& p : particles_) {
    sum += p.weight;
    sum_sq += p.weight * p.weight;
  }
  return sum_sq > 0.0 ? (sum * sum) / sum_sq : 0.0;
}

PoseEstimate MclFilter::estimate() const {
  double wsum = 0.0, mx = 0.0, my = 0.0, cs = 0.0, sn = 0.0;
  for (const Particle& p : particles_) {
    wsum += p.weight;
    mx += p.weight * p.pose.x;
    my += p.weight * p.pose.y;
    cs += p.weight * std::cos(p.pose.theta);
    sn += p.weight * std::sin(p.pose.theta);
  }
  mx /= wsum;
  my /= wsum;
  const double mth = std::atan2(sn, cs);  // circular mean

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Particle& p : particles_) {
    const Eigen::Vector3d r(p.pose.x - mx, p.pose.y - my,
                            wrap_angle(p.pose.theta - mth));
    cov += (p.weight / wsum) * r * r.transpose();
  }
  cov(2, 2) = std::max(cov(2, 2), cfg_.heading_var_floor);

  PoseEstimate est;
  est.mean = Pose2D(mx, my, mth);
  est.cov = cov;
  return est;
}

}  // namespace vlpslam
