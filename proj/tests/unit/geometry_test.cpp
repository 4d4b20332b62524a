#include <cmath>

#include "doctest.h"
#include "vlpslam/geometry.hpp"
#include "vlpslam/rng.hpp"

using namespace vlpslam;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));  // -pi is excluded
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(-0.5) == doctest::Approx(-0.5));

  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-50.0, 50.0);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    // same direction: sin/cos must agree with the unwrapped angle
    CHECK(std::sin(w) == doctest::Approx(std::sin(a)).epsilon(1e-9));
    CHECK(std::cos(w) == doctest::Approx(std::cos(a)).epsilon(1e-9));
  }
}

TEST_CASE("pose composition round trips") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Pose2D a(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4));
    const Pose2D b(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4));

    const Pose2D id = compose(a, inverse(a));
    CHECK(id.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(id.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(wrap_angle(id.theta) == doctest::Approx(0.0).epsilon(1e-12));

    const Pose2D back = compose(a, between(a, b));
    CHECK(back.x == doctest::Approx(b.x).epsilon(1e-10));
    CHECK(back.y == doctest::Approx(b.y).epsilon(1e-10));
    CHECK(wrap_angle(back.theta - b.theta) == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("compose matches the direct rotation formula") {
  const Pose2D a(1.0, 2.0, kPi / 2.0);
  const Pose2D b(3.0, 0.0, 0.1);
  const Pose2D c = compose(a, b);
  // +90 degrees: body x becomes world y
  CHECK(c.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.y == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(c.theta == doctest::Approx(kPi / 2.0 + 0.1));
}

TEST_CASE("rotate is a proper rotation") {
  const Vec2 v{2.0, 0.5};
  const Vec2 r = rotate(v, 1.2);
  CHECK(r.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
  const Vec2 back = rotate(r, -1.2);
  CHECK(back.x == doctest::Approx(v.x).epsilon(1e-12));
  CHECK(back.y == doctest::Approx(v.y).epsilon(1e-12));
  const Vec2 quarter = rotate({1.0, 0.0}, kPi / 2.0);
  CHECK(quarter.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(quarter.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rigid transform composes and inverts") {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const Transform2D t(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec2 p{rng.uniform(-4, 4), rng.uniform(-4, 4)};

    const Vec2 round = t.inverse().apply(t.apply(p));
    CHECK(round.x == doctest::Approx(p.x).epsilon(1e-10));
    CHECK(round.y == doctest::Approx(p.y).epsilon(1e-10));

    const Transform2D u(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec2 lhs = t.compose(u).apply(p);
    const Vec2 rhs = t.apply(u.apply(p));
    CHECK(lhs.x == doctest::Approx(rhs.x).epsilon(1e-10));
    CHECK(lhs.y == doctest::Approx(rhs.y).epsilon(1e-10));
  }

  // from_pose: applying to the local origin recovers the pose position
  const Pose2D pose(1.5, -2.0, 0.7);
  const Transform2D t = Transform2D::from_pose(pose);
  const Vec2 o = t.apply(Vec2{0.0, 0.0});
  CHECK(o.x == doctest::Approx(pose.x));
  CHECK(o.y == doctest::Approx(pose.y));
  CHECK(t.apply(Pose2D()).theta == doctest::Approx(pose.theta));
}
