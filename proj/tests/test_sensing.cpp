#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "gatsbi/sensing.hpp"
#include "gatsbi/types.hpp"
#include "gatsbi/world.hpp"
#include "support.hpp"

using namespace gatsbi;

namespace {

// Re-derives the ray fan documented for simulate_scan: azimuth sweeps the
// outer loop (full turn divided evenly, or a centered span), elevation the
// inner one (even span endpoints included, midpoint when single).
std::vector<Vec3> expected_rays(const Pose& pose, const LidarSpec& spec) {
  std::vector<Vec3> dirs;
  const double hfov = deg2rad(spec.horizontal_fov);
  const bool full = spec.horizontal_fov >= 360.0;
  for (int ia = 0; ia < spec.azimuth_steps; ++ia) {
    double az;
    if (spec.azimuth_steps == 1)
      az = pose.yaw;
    else if (full)
      az = pose.yaw + hfov * ia / spec.azimuth_steps;
    else
      az = pose.yaw - hfov / 2.0 + hfov * ia / (spec.azimuth_steps - 1);
    for (int ie = 0; ie < spec.elevation_steps; ++ie) {
      double el;
      if (spec.elevation_steps == 1)
        el = deg2rad(spec.vertical_fov_min + spec.vertical_fov_max) / 2.0;
      else
        el = deg2rad(spec.vertical_fov_min +
                     (spec.vertical_fov_max - spec.vertical_fov_min) * ie /
                         (spec.elevation_steps - 1));
      dirs.emplace_back(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                        std::sin(el));
    }
  }
  return dirs;
}

WorldModel two_body_world() {
  return world_from_primitives(
      {{Vec3(2, -1, 0), Vec3(4, 2, 3), GroundTruthLabel::Bridge},
       {Vec3(-3, -3, -1), Vec3(5, 4, 0), GroundTruthLabel::Obstacle}},
      1.0);
}

}  // namespace

TEST_CASE("every ray agrees with the slab-clipping oracle") {
  const WorldModel world = two_body_world();
  Pose pose;
  pose.position = Vec3(0.37, -0.22, 0.41);
  pose.yaw = 0.3;  // keeps rays off the voxel axes

  LidarSpec spec;
  spec.range_max = 9.0;
  spec.horizontal_fov = 360.0;
  spec.vertical_fov_min = -40.0;
  spec.vertical_fov_max = 25.0;
  spec.azimuth_steps = 17;
  spec.elevation_steps = 5;

  const LabeledScan scan = simulate_scan(world, pose, spec);
  CHECK(scan.origin.position == pose.position);
  CHECK(scan.range_max == spec.range_max);

  std::size_t ri = 0, mi = 0;
  for (const Vec3& dir : expected_rays(pose, spec)) {
    const auto hit = testsupport::first_truth_hit(world, pose.position, dir, spec.range_max);
    if (hit) {
      REQUIRE(ri < scan.returns.size());
      const LidarReturn& ret = scan.returns[ri++];
      CHECK(ret.voxel == hit->voxel);
      CHECK(ret.label == *world.label(hit->voxel));
      CHECK((ret.point - (pose.position + dir * hit->t_in)).norm() < 1e-7);
    } else {
      REQUIRE(mi < scan.miss_directions.size());
      CHECK((scan.miss_directions[mi++] - dir).norm() < 1e-12);
    }
  }
  CHECK(ri == scan.returns.size());
  CHECK(mi == scan.miss_directions.size());
  CHECK(ri + mi == std::size_t(spec.azimuth_steps) * spec.elevation_steps);
  CHECK(ri > 0);  // the fan actually sees both bodies
  CHECK(mi > 0);
}

TEST_CASE("centered azimuth span and single-elevation midpoint") {
  const WorldModel world = world_from_primitives(
      {{Vec3(5, 5, 0), Vec3(6, 6, 1), GroundTruthLabel::Obstacle}}, 1.0, 6);
  Pose pose;
  pose.position = Vec3(0.5, 0.5, 0.5);
  pose.yaw = 0.7;

  LidarSpec spec;
  spec.range_max = 2.0;  // too short to reach the lone box: every ray misses
  spec.horizontal_fov = 90.0;
  spec.vertical_fov_min = -10.0;
  spec.vertical_fov_max = 30.0;
  spec.azimuth_steps = 3;
  spec.elevation_steps = 1;

  const LabeledScan scan = simulate_scan(world, pose, spec);
  REQUIRE(scan.returns.empty());
  REQUIRE(scan.miss_directions.size() == 3);

  const double el = deg2rad(10.0);  // midpoint of -10..30
  const double step = deg2rad(45.0);
  for (int i = 0; i < 3; ++i) {
    const double az = pose.yaw - step + step * i;
    const Vec3 want(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    CHECK((scan.miss_directions[i] - want).norm() < 1e-12);
  }
}

TEST_CASE("single ray points along yaw and reports the first voxel") {
  const WorldModel world = world_from_primitives(
      {{Vec3(3, 0, 0), Vec3(4, 1, 1), GroundTruthLabel::Obstacle}}, 1.0, 4);
  Pose pose;
  pose.position = Vec3(0.5, 0.5, 0.5);
  pose.yaw = 0.0;

  LidarSpec spec;
  spec.range_max = 10.0;
  spec.azimuth_steps = 1;
  spec.elevation_steps = 1;
  spec.vertical_fov_min = 0.0;
  spec.vertical_fov_max = 0.0;

  const LabeledScan scan = simulate_scan(world, pose, spec);
  REQUIRE(scan.returns.size() == 1);
  CHECK(scan.miss_directions.empty());
  CHECK(scan.returns[0].voxel == Vec3i(3, 0, 0));
  CHECK(scan.returns[0].label == GroundTruthLabel::Obstacle);
  CHECK(scan.returns[0].point.x() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("label noise is seeded, per-return, and total at p=1") {
  const WorldModel world = two_body_world();
  Pose pose;
  pose.position = Vec3(0.37, -0.22, 0.41);
  pose.yaw = 0.3;

  LidarSpec spec;
  spec.range_max = 9.0;
  spec.vertical_fov_min = -40.0;
  spec.vertical_fov_max = 25.0;
  spec.azimuth_steps = 17;
  spec.elevation_steps = 5;

  const LabeledScan clean = simulate_scan(world, pose, spec);
  REQUIRE(!clean.returns.empty());

  SUBCASE("p=1 flips every label and nothing else") {
    spec.label_noise = 1.0;
    std::mt19937_64 rng(7);
    const LabeledScan noisy = simulate_scan(world, pose, spec, &rng);
    REQUIRE(noisy.returns.size() == clean.returns.size());
    for (std::size_t i = 0; i < clean.returns.size(); ++i) {
      CHECK(noisy.returns[i].voxel == clean.returns[i].voxel);
      CHECK(noisy.returns[i].point == clean.returns[i].point);
      CHECK(noisy.returns[i].label != clean.returns[i].label);
    }
  }

  SUBCASE("same seed gives the same flips, and some labels do flip") {
    spec.label_noise = 0.5;
    std::mt19937_64 a(42), b(42);
    const LabeledScan sa = simulate_scan(world, pose, spec, &a);
    const LabeledScan sb = simulate_scan(world, pose, spec, &b);
    REQUIRE(sa.returns.size() == sb.returns.size());
    int flipped = 0;
    for (std::size_t i = 0; i < sa.returns.size(); ++i) {
      CHECK(sa.returns[i].label == sb.returns[i].label);
      flipped += sa.returns[i].label != clean.returns[i].label;
    }
    CHECK(flipped > 0);
    CHECK(flipped < int(sa.returns.size()));
  }

  SUBCASE("noise without an rng is rejected") {
    spec.label_noise = 0.5;
    CHECK_THROWS_WITH_AS(simulate_scan(world, pose, spec), "label noise requires an rng",
                         ValidationError);
  }
}

TEST_CASE("invalid poses and specs are rejected") {
  const WorldModel world = two_body_world();
  LidarSpec spec;

  Pose outside;
  outside.position = Vec3(40.0, 0.0, 0.0);
  CHECK_THROWS_WITH_AS(simulate_scan(world, outside, spec), "sensor pose outside world bounds",
                       ValidationError);

  Pose embedded;
  embedded.position = Vec3(2.5, 0.5, 0.5);  // inside the bridge block
  CHECK_THROWS_WITH_AS(simulate_scan(world, embedded, spec), "sensor embedded in geometry",
                       ValidationError);

  Pose ok;
  ok.position = Vec3(0.5, 0.5, 0.5);
  LidarSpec zero_az = spec;
  zero_az.azimuth_steps = 0;
  CHECK_THROWS_WITH_AS(simulate_scan(world, ok, zero_az), "lidar needs at least one ray per axis",
                       ValidationError);
  LidarSpec zero_el = spec;
  zero_el.elevation_steps = 0;
  CHECK_THROWS_WITH_AS(simulate_scan(world, ok, zero_el), "lidar needs at least one ray per axis",
                       ValidationError);
}
