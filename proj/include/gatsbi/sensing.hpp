#pragma once

#include <optional>
#include <random>
#include <vector>

#include "gatsbi/types.hpp"
#include "gatsbi/world.hpp"

namespace gatsbi {

struct LidarSpec {
  double range_max = 100.0;        // meters
  double horizontal_fov = 360.0;   // degrees, centered on yaw when < 360
  double vertical_fov_min = -15.0; // degrees
  double vertical_fov_max = 15.0;  // degrees
  int azimuth_steps = 360;
  int elevation_steps = 16;
  double label_noise = 0.0;        // per-return probability of a flipped label
};

struct LidarReturn {
  Vec3i voxel{Vec3i::Zero()};  // first occupied voxel pierced by the ray
  Vec3 point{Vec3::Zero()};    // where the ray enters that voxel
  GroundTruthLabel label = GroundTruthLabel::Obstacle;
};

struct LabeledScan {
  Pose origin;
  double range_max = 0.0;
  std::vector<LidarReturn> returns;
  std::vector<Vec3> miss_directions;  // unit rays that hit nothing in range
};

// Simulates one panoramic scan from the pose. Rays sweep azimuth (outer) then
// elevation (inner); a ray returns the first ground-truth occupied voxel whose
// chord it actually crosses, or counts as a miss at range_max / grid exit.
// Labels are ground truth unless label_noise > 0, in which case rng must be
// provided and each return flips with that probability.
// Throws ValidationError if the pose sits outside the bounds or inside
// occupied geometry ("sensor embedded in geometry").
LabeledScan simulate_scan(const WorldModel& world, const Pose& pose, const LidarSpec& spec,
                          std::mt19937_64* rng = nullptr);

}  // namespace gatsbi
