#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gatsbi/types.hpp"

namespace gatsbi {

// One voxel pierced by a segment, with the chord parameterized by arc length
// in meters from the segment start.
struct VoxelSpan {
  Vec3i voxel{Vec3i::Zero()};
  double t_in = 0.0;
  double t_out = 0.0;
};

namespace detail {
// Chords shorter than this fraction of a voxel edge are corner or edge grazes
// and are not reported: a graze neither blocks sight nor carves free space.
constexpr double kChordEpsScale = 1e-9;
}  // namespace detail

// Walks the voxels pierced by the segment p0 -> p0 + dir_unit * length, clipped
// to the grid bounds. Visits them in order with their chord [t_in, t_out]; the
// visitor returns false to stop the walk. Zero-length chords are skipped.
template <class Visitor>
void traverse_segment(const Vec3& p0, const Vec3& dir_unit, double length, double voxel_size,
                      const GridBounds& bounds, Visitor&& visit) {
  if (!(length > 0.0)) return;
  const double chord_eps = detail::kChordEpsScale * voxel_size;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Clip [0, length] against the bounds box.
  double t0 = 0.0;
  double t1 = length;
  for (int i = 0; i < 3; ++i) {
    const double lo = bounds.min[i] * voxel_size;
    const double hi = (bounds.max[i] + 1) * voxel_size;
    const double d = dir_unit[i];
    if (std::abs(d) < 1e-15) {
      if (p0[i] < lo || p0[i] >= hi) return;
      continue;
    }
    double ta = (lo - p0[i]) / d;
    double tb = (hi - p0[i]) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 >= t1) return;

  Vec3i v = voxel_of(p0 + dir_unit * t0, voxel_size);
  v = v.cwiseMax(bounds.min).cwiseMin(bounds.max);

  Vec3i step = Vec3i::Zero();
  Vec3 t_next = Vec3::Constant(kInf);
  Vec3 t_delta = Vec3::Constant(kInf);
  for (int i = 0; i < 3; ++i) {
    const double d = dir_unit[i];
    if (d > 1e-15) {
      step[i] = 1;
      t_next[i] = ((v[i] + 1) * voxel_size - p0[i]) / d;
      t_delta[i] = voxel_size / d;
    } else if (d < -1e-15) {
      step[i] = -1;
      t_next[i] = (v[i] * voxel_size - p0[i]) / d;
      t_delta[i] = voxel_size / -d;
    }
  }

  double t_curr = t0;
  const std::int64_t max_steps = 3 * (std::int64_t(bounds.extent().sum()) + 8);
  for (std::int64_t n = 0; n < max_steps; ++n) {
    int axis = 0;
    if (t_next[1] < t_next[axis]) axis = 1;
    if (t_next[2] < t_next[axis]) axis = 2;
    const double t_exit = std::min(t_next[axis], t1);
    if (t_exit - t_curr > chord_eps) {
      if (!visit(static_cast<const Vec3i&>(v), t_curr, t_exit)) return;
    }
    if (t_next[axis] >= t1) return;
    t_curr = t_next[axis];
    v[axis] += step[axis];
    if (v[axis] < bounds.min[axis] || v[axis] > bounds.max[axis]) return;
    t_next[axis] += t_delta[axis];
  }
}

template <class Visitor>
void traverse_segment(const Vec3& p0, const Vec3& p1, double voxel_size, const GridBounds& bounds,
                      Visitor&& visit) {
  const Vec3 seg = p1 - p0;
  const double len = seg.norm();
  if (!(len > 0.0)) return;
  traverse_segment(p0, Vec3(seg / len), len, voxel_size, bounds,
                   std::forward<Visitor>(visit));
}

// Materialized traversal, mostly for tests and audits.
inline std::vector<VoxelSpan> segment_voxels(const Vec3& p0, const Vec3& p1, double voxel_size,
                                             const GridBounds& bounds) {
  std::vector<VoxelSpan> out;
  traverse_segment(p0, p1, voxel_size, bounds, [&](const Vec3i& v, double a, double b) {
    out.push_back({v, a, b});
    return true;
  });
  return out;
}

}  // namespace gatsbi
