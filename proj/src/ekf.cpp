#include "vlpslam/ekf.hpp"

#include <cmath>

namespace vlpslam {

EkfFusion::EkfFusion(const EkfConfig& cfg) : cfg_(cfg) {}

void EkfFusion::init(const Pose2D& pose, const Eigen::Matrix3d& cov) {
  pose_ = pose;
  P_ = cov;
  initialized_ = true;
  finalize_covariance();
}

void EkfFusion::predict(const OdometrySample& odo) {
  const double c = std::cos(pose_.theta);
  const double s = std::sin(pose_.theta);
  const double dx = odo.dx, dy = odo.dy, dth = odo.dtheta;

  pose_ = Pose2D(pose_.x + c * dx - s * dy, pose_.y + s * dx + c * dy,
                 wrap_angle(pose_.theta + dth));

  Eigen::Matrix3d F = Eigen::Matrix3d::Identity();
  F(0, 2) = -s * dx - c * dy;
  F(1, 2) = c * dx - s * dy;
  Eigen::Matrix3d G = Eigen::Matrix3d::Identity();
  G(0, 0) = c;
  G(0, 1) = -s;
  G(1, 0) = s;
  G(1, 1) = c;

  // Body-frame increment noise from the rot-trans-rot model: longitudinal
  // from the translation term, lateral from heading error over the arc, and
  // heading from both rotations.
  const MotionDecomposition m = decompose_motion(Pose2D(), Pose2D(dx, dy, dth));
  const double std_r1 = cfg_.noise.a1 * std::abs(m.rot1) + cfg_.noise.a2 * m.trans;
  const double std_tr = cfg_.noise.a3 * m.trans +
                        cfg_.noise.a4 * (std::abs(m.rot1) + std::abs(m.rot2));
  const double std_r2 = cfg_.noise.a1 * std::abs(m.rot2) + cfg_.noise.a2 * m.trans;
  const double floor = cfg_.min_increment_std;
  const double sx = std_tr + floor;
  const double sy = m.trans * std_r1 + floor;
  const double sth = std_r1 + std_r2 + floor;
  Eigen::Matrix3d Q = Eigen::Matrix3d::Zero();
  Q(0, 0) = sx * sx;
  Q(1, 1) = sy * sy;
  Q(2, 2) = sth * sth;

  P_ = F * P_ * F.transpose() + G * Q * G.transpose();
  finalize_covariance();
}

bool EkfFusion::update_position(const Vec2& z, const Eigen::Matrix2d& R) {
  Eigen::Matrix<double, 2, 3> H = Eigen::Matrix<double, 2, 3>::Zero();
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;
  const Eigen::Vector2d nu(z.x - pose_.x, z.y - pose_.y);
  const Eigen::Matrix2d S = H * P_ * H.transpose() + R;
  const Eigen::Matrix2d Sinv = S.inverse();
  if (nu.dot(Sinv * nu) > cfg_.gate_2d) {
    ++rejected_;
    return false;
  }
  const Eigen::Matrix<double, 3, 2> K = P_ * H.transpose() * Sinv;
  const Eigen::Vector3d dx = K * nu;
  pose_ = Pose2D(pose_.x + dx(0), pose_.y + dx(1), wrap_angle(pose_.theta + dx(2)));
  const Eigen::Matrix3d IKH = Eigen::Matrix3d::Identity() - K * H;
  P_ = IKH * P_ * IKH.transpose() + K * R * K.transpose();
  finalize_covariance();
  return true;
}

bool EkfFusion::update_pose(const Pose2D& z, const Eigen::Matrix3d& R) {
  const Eigen::Vector3d nu(z.x - pose_.x, z.y - pose_.y,
                           wrap_angle(z.theta - pose_.theta));
  const Eigen::Matrix3d S = P_ + R;  // H is identity
  const Eigen::Matrix3d Sinv = S.inverse();
  if (nu.dot(Sinv * nu) > cfg_.gate_3d) {
    ++rejected_;
    return false;
  }
  const Eigen::Matrix3d K = P_ * Sinv;
  const Eigen::Vector3d dx = K * nu;
  pose_ = Pose2D(pose_.x + dx(0), pose_.y + dx(1), wrap_angle(pose_.theta + dx(2)));
  const Eigen::Matrix3d IKH = Eigen::Matrix3d::Identity() - K;
  P_ = IKH * P_ * IKH.transpose() + K * R * K.transpose();
  finalize_covariance();
  return true;
}

void EkfFusion::reset_position(const Vec2& p, const Eigen::Matrix2d& cov) {
  pose_ = Pose2D(p.x, p.y, pose_.theta);
  P_.topLeftCorner<2, 2>() = cov;
  P_(0, 2) = P_(2, 0) = 0.0;
  P_(1, 2) = P_(2, 1) = 0.0;
  finalize_covariance();
}

void EkfFusion::finalize_covariance() {
  P_ = (0.5 * (P_ + P_.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P_);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < 0.0) {
    // Numerical guard only; the Joseph-form updates keep this tiny.
    P_ += (-min_eig + 1e-12) * Eigen::Matrix3d::Identity();
  }
}

}  // namespace vlpslam
