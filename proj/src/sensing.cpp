#include "gatsbi/sensing.hpp"

#include <cmath>

#include "gatsbi/grid_geometry.hpp"

namespace gatsbi {

LabeledScan simulate_scan(const WorldModel& world, const Pose& pose, const LidarSpec& spec,
                          std::mt19937_64* rng) {
  if (!world.bounds().contains(voxel_of(pose.position, world.voxel_size())))
    throw ValidationError("sensor pose outside world bounds");
  if (!world.is_empty(voxel_of(pose.position, world.voxel_size())))
    throw ValidationError("sensor embedded in geometry");
  if (spec.azimuth_steps < 1 || spec.elevation_steps < 1)
    throw ValidationError("lidar needs at least one ray per axis");
  if (spec.label_noise > 0.0 && rng == nullptr)
    throw ValidationError("label noise requires an rng");

  LabeledScan scan;
  scan.origin = pose;
  scan.range_max = spec.range_max;

  const double hfov = deg2rad(spec.horizontal_fov);
  const bool full_circle = spec.horizontal_fov >= 360.0;

  for (int ia = 0; ia < spec.azimuth_steps; ++ia) {
    double az;
    if (spec.azimuth_steps == 1) {
      az = pose.yaw;
    } else if (full_circle) {
      az = pose.yaw + hfov * ia / spec.azimuth_steps;
    } else {
      az = pose.yaw - hfov / 2.0 + hfov * ia / (spec.azimuth_steps - 1);
    }
    for (int ie = 0; ie < spec.elevation_steps; ++ie) {
      double el;
      if (spec.elevation_steps == 1) {
        el = deg2rad(spec.vertical_fov_min + spec.vertical_fov_max) / 2.0;
      } else {
        el = deg2rad(spec.vertical_fov_min +
                     (spec.vertical_fov_max - spec.vertical_fov_min) * ie /
                         (spec.elevation_steps - 1));
      }
      const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));

      bool hit = false;
      traverse_segment(pose.position, dir, spec.range_max, world.voxel_size(), world.bounds(),
                       [&](const Vec3i& v, double t_in, double) {
                         const auto label = world.label(v);
                         if (!label) return true;
                         GroundTruthLabel reported = *label;
                         if (spec.label_noise > 0.0) {
                           const double u = double(((*rng)() >> 11)) * 0x1.0p-53;
                           if (u < spec.label_noise)
                             reported = (reported == GroundTruthLabel::Bridge)
                                            ? GroundTruthLabel::Obstacle
                                            : GroundTruthLabel::Bridge;
                         }
                         scan.returns.push_back({v, pose.position + dir * t_in, reported});
                         hit = true;
                         return false;
                       });
      if (!hit) scan.miss_directions.push_back(dir);
    }
  }
  return scan;
}

}  // namespace gatsbi
