#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fastnav/poly.hpp"
#include "fastnav/types.hpp"

using namespace fastnav;

namespace {

PolySegment make_segment(std::vector<double> x, std::vector<double> y,
                         std::vector<double> z, double duration) {
  PolySegment s;
  s.coeffs = {std::move(x), std::move(y), std::move(z)};
  s.duration = duration;
  return s;
}

PolySegment random_segment(std::mt19937_64& rng, int order, double duration) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  PolySegment s;
  for (auto& axis : s.coeffs) {
    axis.resize(static_cast<std::size_t>(order) + 1);
    for (auto& c : axis) c = coeff(rng);
  }
  s.duration = duration;
  return s;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("constant segment evaluates to its value everywhere") {
  PolyTrajectory traj;
  traj.segments.push_back(PolySegment::constant(Vec3(5, 5, 5), 2.0));
  for (double t : {0.0, 0.3, 1.7, 2.0}) {
    const Vec3 v = poly_eval(traj, t, 0);
    CHECK(v.x() == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(v.y() == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(v.z() == doctest::Approx(5.0).epsilon(1e-14));
  }
}

TEST_CASE("derivative of t^2 is 2t") {
  PolyTrajectory traj;
  traj.segments.push_back(make_segment({0, 0, 1}, {0, 0, 0}, {0, 0, 0}, 3.0));
  CHECK(poly_eval(traj, 2.0, 0).x() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(poly_eval(traj, 2.0, 1).x() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(poly_eval(traj, 2.0, 2).x() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(poly_eval(traj, 2.0, 1).y() == 0.0);
  CHECK(poly_eval(traj, 2.0, 1).z() == 0.0);
}

TEST_CASE("derivatives agree with central finite differences") {
  std::mt19937_64 rng(321);
  PolyTrajectory traj;
  traj.segments.push_back(random_segment(rng, 5, 0.8));
  traj.segments.push_back(random_segment(rng, 5, 1.3));
  const double total = traj.total_duration();
  CHECK(total == doctest::Approx(2.1));

  const double h = 1e-5;
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    // Stay clear of the joint: the two random segments do not line up there.
    const bool first = pick(rng) < 0.5;
    const double lo = first ? 10 * h : 0.8 + 10 * h;
    const double hi = first ? 0.8 - 10 * h : total - 10 * h;
    const double t = lo + pick(rng) * (hi - lo);
    for (int deriv = 1; deriv <= 3; ++deriv) {
      const Vec3 exact = poly_eval(traj, t, deriv);
      const Vec3 fd =
          (poly_eval(traj, t + h, deriv - 1) - poly_eval(traj, t - h, deriv - 1)) /
          (2.0 * h);
      for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(exact[a] - fd[a]) <= 1e-5 * std::max(1.0, std::abs(exact[a])));
      }
    }
  }
}

TEST_CASE("the later segment owns an interior joint") {
  PolyTrajectory traj;
  traj.segments.push_back(PolySegment::constant(Vec3(1, 1, 1), 1.0));
  traj.segments.push_back(PolySegment::constant(Vec3(2, 2, 2), 1.0));
  CHECK(poly_eval(traj, 1.0, 0).x() == doctest::Approx(2.0));
  CHECK(poly_eval(traj, 1.0 - 1e-12, 0).x() == doctest::Approx(1.0));
}

TEST_CASE("poly_eval range handling") {
  PolyTrajectory traj;
  traj.segments.push_back(PolySegment::constant(Vec3(3, 0, 0), 2.0));
  CHECK_THROWS_AS(poly_eval(traj, 2.001, 0), std::out_of_range);
  CHECK_THROWS_AS(poly_eval(traj, -0.001, 0), std::out_of_range);
  CHECK_THROWS_AS(poly_eval(traj, 1.0, -1), std::invalid_argument);
  // A sub-nanosecond overshoot is absorbed by clamping.
  CHECK(poly_eval(traj, 2.0 + 1e-10, 0).x() == doctest::Approx(3.0));

  PolyTrajectory empty;
  CHECK_THROWS_AS(poly_eval(empty, 0.0, 0), std::out_of_range);
}

TEST_CASE("attitude from thrust axis and yaw") {
  SUBCASE("level with zero yaw is the identity") {
    const Rotation R = rotation_from_z_and_yaw(Vec3(0, 0, 1), 0.0);
    CHECK((R.matrix() - Mat3::Identity()).norm() < 1e-12);
  }
  SUBCASE("level with quarter-turn yaw") {
    const Rotation R = rotation_from_z_and_yaw(Vec3(0, 0, 1), M_PI / 2.0);
    CHECK((R.body_x() - Vec3(0, 1, 0)).norm() < 1e-12);
    CHECK((R.body_y() - Vec3(-1, 0, 0)).norm() < 1e-12);
    CHECK((R.body_z() - Vec3(0, 0, 1)).norm() < 1e-12);
  }
  SUBCASE("ten degree tilt keeps the frame orthonormal") {
    const double tilt = 10.0 * M_PI / 180.0;
    const Vec3 b3(std::sin(tilt), 0.0, std::cos(tilt));
    const Rotation R = rotation_from_z_and_yaw(b3, 0.0);
    CHECK((R.body_z() - b3).norm() < 1e-12);
    CHECK(R.body_z().dot(b3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((R.matrix().transpose() * R.matrix() - Mat3::Identity()).norm() < 1e-9);
    CHECK(R.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(R.tilt() == doctest::Approx(tilt).epsilon(1e-12));
  }
  SUBCASE("random inputs stay orthonormal") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> tilt_d(0.0, 85.0 * M_PI / 180.0);
    std::uniform_real_distribution<double> az_d(-M_PI, M_PI);
    std::uniform_real_distribution<double> yaw_d(-M_PI, M_PI);
    for (int i = 0; i < 500; ++i) {
      const double tilt = tilt_d(rng), az = az_d(rng);
      const Vec3 b3(std::sin(tilt) * std::cos(az), std::sin(tilt) * std::sin(az),
                    std::cos(tilt));
      const Rotation R = rotation_from_z_and_yaw(b3.normalized(), yaw_d(rng));
      CHECK((R.matrix().transpose() * R.matrix() - Mat3::Identity()).norm() < 1e-9);
      CHECK(std::abs(R.matrix().determinant() - 1.0) < 1e-9);
      CHECK((R.body_z() - b3.normalized()).norm() < 1e-9);
    }
  }
  SUBCASE("rejects bad axes") {
    CHECK_THROWS_AS(rotation_from_z_and_yaw(Vec3(0, 0, 2), 0.0), std::invalid_argument);
    const double tilt = 89.5 * M_PI / 180.0;
    CHECK_THROWS_AS(
        rotation_from_z_and_yaw(Vec3(std::sin(tilt), 0, std::cos(tilt)), 0.0),
        DegenerateAttitudeError);
  }
}

TEST_CASE("rotation matrix validation and interpolation") {
  CHECK_THROWS_AS(Rotation::from_matrix(2.0 * Mat3::Identity()), std::invalid_argument);
  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  CHECK_THROWS_AS(Rotation::from_matrix(reflect), std::invalid_argument);

  const double ang = 30.0 * M_PI / 180.0;
  const Rotation R = Rotation::from_matrix(
      Eigen::AngleAxisd(ang, Vec3::UnitZ()).toRotationMatrix());
  CHECK(Rotation::identity().angle_to(R) == doctest::Approx(ang).epsilon(1e-12));

  const Rotation target = Rotation::from_matrix(
      Eigen::AngleAxisd(2.0 * ang, Vec3::UnitZ()).toRotationMatrix());
  const Rotation half = Rotation::identity().rotated_toward(target, 0.5);
  CHECK(half.angle_to(Rotation::identity()) == doctest::Approx(ang).epsilon(1e-9));
  const Rotation full = Rotation::identity().rotated_toward(target, 1.0);
  CHECK(full.angle_to(target) < 1e-12);

  const Rotation tilted = Rotation::from_matrix(
      Eigen::AngleAxisd(20.0 * M_PI / 180.0, Vec3::UnitY()).toRotationMatrix());
  CHECK(tilted.tilt() == doctest::Approx(20.0 * M_PI / 180.0).epsilon(1e-12));
}

TEST_CASE("wrap_angle maps into [-pi, pi)") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(wrap_angle(M_PI) == doctest::Approx(-M_PI).epsilon(1e-12));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(-M_PI).epsilon(1e-12));
  CHECK(wrap_angle(3.5 * M_PI) == doctest::Approx(-0.5 * M_PI).epsilon(1e-12));
  CHECK(wrap_angle(-2.5 * M_PI) == doctest::Approx(-0.5 * M_PI).epsilon(1e-12));
}

}  // TEST_SUITE("core")
