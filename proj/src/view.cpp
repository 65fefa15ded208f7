#include "gatsbi/view.hpp"

#include <cmath>

#include "gatsbi/grid_geometry.hpp"

namespace gatsbi {

namespace {

double aim_yaw(const Vec3& from, const Vec3& at) {
  const double dx = at.x() - from.x();
  const double dy = at.y() - from.y();
  if (std::abs(dx) < 1e-12 && std::abs(dy) < 1e-12) return 0.0;
  return std::atan2(dy, dx);
}

// Visits every Free cell that sees `face` of `bn`, in lexicographic order.
// The visitor returns false to stop early.
template <class Visitor>
void for_each_face_viewpoint(const SemanticOccupancyGrid& grid, const Vec3i& bn, Face face,
                             const ViewSpec& spec, Visitor&& visit) {
  if (is_occupied(grid.state(bn + face_step(face)))) return;

  const double s = grid.voxel_size();
  const Vec3 fc = face_center(bn, face, s);
  const double cone_half = std::min(deg2rad(spec.apex_deg) / 2.0 + deg2rad(spec.angle_tol_deg),
                                    kPi);
  const double cos_half = std::cos(cone_half);
  const Vec3 normal = face_normal(face);

  Vec3i lo = voxel_of(fc - Vec3::Constant(spec.d_max), s) - Vec3i::Ones();
  Vec3i hi = voxel_of(fc + Vec3::Constant(spec.d_max), s) + Vec3i::Ones();
  lo = lo.cwiseMax(grid.bounds().min);
  hi = hi.cwiseMin(grid.bounds().max);

  const double d2_min = spec.d_min * spec.d_min;
  const double d2_max = spec.d_max * spec.d_max;

  for (int x = lo.x(); x <= hi.x(); ++x)
    for (int y = lo.y(); y <= hi.y(); ++y)
      for (int z = lo.z(); z <= hi.z(); ++z) {
        const Vec3i v(x, y, z);
        if (grid.state(v) != CellState::Free) continue;
        const Vec3 ray = voxel_center(v, s) - fc;
        const double d2 = ray.squaredNorm();
        if (d2 < d2_min || d2 > d2_max) continue;
        if (ray.dot(normal) < cos_half * std::sqrt(d2)) continue;
        if (!is_viewable(grid, v, bn, face, spec)) continue;
        if (!visit(v)) return;
      }
}

}  // namespace

bool is_viewable(const SemanticOccupancyGrid& grid, const Vec3i& free_voxel,
                 const Vec3i& bridge_voxel, Face face, const ViewSpec& spec) {
  if (grid.state(free_voxel) != CellState::Free) return false;
  if (!is_bridge(grid.state(bridge_voxel))) return false;
  if (is_occupied(grid.state(bridge_voxel + face_step(face)))) return false;

  const double s = grid.voxel_size();
  const Vec3 fc = face_center(bridge_voxel, face, s);
  const Vec3 vc = voxel_center(free_voxel, s);
  const Vec3 ray = vc - fc;
  const double d = ray.norm();
  if (d < spec.d_min || d > spec.d_max) return false;

  const double cone_half = std::min(deg2rad(spec.apex_deg) / 2.0 + deg2rad(spec.angle_tol_deg),
                                    kPi);
  if (ray.dot(face_normal(face)) < std::cos(cone_half) * d) return false;

  // Sight line: everything the segment crosses must be Free. The target sits
  // behind its face, so it only ever grazes the segment's far endpoint.
  bool blocked = false;
  traverse_segment(vc, fc, s, grid.bounds(), [&](const Vec3i& v, double, double) {
    if (v == bridge_voxel) return true;
    if (grid.state(v) != CellState::Free) {
      blocked = true;
      return false;
    }
    return true;
  });
  return !blocked;
}

std::vector<Candidate> generate_viewpoints(const SemanticOccupancyGrid& grid,
                                           const ViewSpec& spec) {
  std::vector<Candidate> out;
  for (const Vec3i& bn : grid.bridge_not_inspected_cells()) {
    for (Face face : kAllFaces) {
      const Vec3 fc = face_center(bn, face, grid.voxel_size());
      for_each_face_viewpoint(grid, bn, face, spec, [&](const Vec3i& v) {
        const Vec3 vc = voxel_center(v, grid.voxel_size());
        out.push_back({v, bn, face, Pose{vc, aim_yaw(vc, fc)}});
        return true;
      });
    }
  }
  return out;
}

SemanticOccupancyGrid full_knowledge_grid(const WorldModel& world) {
  SemanticOccupancyGrid grid(world.voxel_size(), world.bounds());
  const GridBounds& b = world.bounds();
  for (int x = b.min.x(); x <= b.max.x(); ++x)
    for (int y = b.min.y(); y <= b.max.y(); ++y)
      for (int z = b.min.z(); z <= b.max.z(); ++z) {
        const Vec3i v(x, y, z);
        const auto label = world.label(v);
        if (label)
          grid.observe_hit(v, *label);
        else
          grid.observe_free(v);
      }
  return grid;
}

std::vector<Vec3i> inspectable_set(const WorldModel& world, const ViewSpec& spec) {
  const SemanticOccupancyGrid grid = full_knowledge_grid(world);
  std::vector<Vec3i> out;
  for (const Vec3i& bn : grid.bridge_not_inspected_cells()) {
    bool seen = false;
    for (Face face : kAllFaces) {
      for_each_face_viewpoint(grid, bn, face, spec, [&](const Vec3i&) {
        seen = true;
        return false;
      });
      if (seen) break;
    }
    if (seen) out.push_back(bn);
  }
  return out;
}

}  // namespace gatsbi
