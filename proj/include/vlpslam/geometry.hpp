#pragma once

#include <cmath>

namespace vlpslam {

inline constexpr double kPi = 3.14159265358979323846;

// Normalizes an angle to (-pi, pi].
double wrap_angle(double a);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

// Planar pose; theta is kept normalized to (-pi, pi] by all operations here.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

  Vec2 position() const { return {x, y}; }
  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
  }
};

// Pose composition a (+) b: b expressed in a's frame, result in a's parent frame.
Pose2D compose(const Pose2D& a, const Pose2D& b);

// Inverse pose so that compose(a, inverse(a)) is identity.
Pose2D inverse(const Pose2D& a);

// Relative pose of b in a's frame: compose(a, between(a, b)) == b.
Pose2D between(const Pose2D& a, const Pose2D& b);

// Rotates v by angle.
Vec2 rotate(const Vec2& v, double angle);

// Rigid 2D transform (rotation then translation), used for frame re-expression.
class Transform2D {
 public:
  Transform2D() = default;
  Transform2D(double tx, double ty, double rot)
      : tx_(tx), ty_(ty), rot_(wrap_angle(rot)) {}

  static Transform2D identity() { return {}; }
  // Transform mapping the origin of frame `pose` (a pose in the parent frame)
  // onto the parent frame: apply(x_local) = pose (+) x_local.
  static Transform2D from_pose(const Pose2D& pose) {
    return {pose.x, pose.y, pose.theta};
  }

  Vec2 apply(const Vec2& p) const {
    const Vec2 r = rotate(p, rot_);
    return {r.x + tx_, r.y + ty_};
  }
  Pose2D apply(const Pose2D& p) const {
    const Vec2 t = apply(Vec2{p.x, p.y});
    return {t.x, t.y, wrap_angle(p.theta + rot_)};
  }
  Transform2D compose(const Transform2D& o) const {
    const Vec2 t = apply(Vec2{o.tx_, o.ty_});
    return {t.x, t.y, rot_ + o.rot_};
  }
  Transform2D inverse() const {
    const Vec2 t = rotate({-tx_, -ty_}, -rot_);
    return {t.x, t.y, -rot_};
  }

  double tx() const { return tx_; }
  double ty() const { return ty_; }
  double rotation() const { return rot_; }
  bool is_identity() const { return tx_ == 0.0 && ty_ == 0.0 && rot_ == 0.0; }

 private:
  double tx_ = 0.0;
  double ty_ = 0.0;
  double rot_ = 0.0;
};

}  // namespace vlpslam
