#include "gatsbi/world.hpp"

#include <algorithm>
#include <cmath>

namespace gatsbi {

namespace {

// Cells whose centers fall in [min, max) belong to the box.
void box_index_range(const Vec3& min, const Vec3& max, double voxel_size, Vec3i& lo, Vec3i& hi) {
  for (int i = 0; i < 3; ++i) {
    lo[i] = int(std::ceil(min[i] / voxel_size - 0.5));
    hi[i] = int(std::ceil(max[i] / voxel_size - 0.5)) - 1;
  }
}

}  // namespace

WorldModel::WorldModel(double voxel_size, const GridBounds& bounds)
    : voxel_size_(voxel_size), bounds_(bounds) {
  if (!(voxel_size > 0.0)) throw ValidationError("voxel_size must be positive");
  cells_.assign(std::size_t(bounds_.cell_count()), 0);
}

std::optional<GroundTruthLabel> WorldModel::label(const Vec3i& v) const {
  if (!bounds_.contains(v)) return std::nullopt;
  switch (cells_[std::size_t(bounds_.linear_index(v))]) {
    case 1: return GroundTruthLabel::Bridge;
    case 2: return GroundTruthLabel::Obstacle;
    default: return std::nullopt;
  }
}

void WorldModel::set_label(const Vec3i& v, GroundTruthLabel label) {
  if (!bounds_.contains(v)) throw ValidationError("cell outside world bounds");
  std::uint8_t& cell = cells_[std::size_t(bounds_.linear_index(v))];
  const std::uint8_t next = (label == GroundTruthLabel::Bridge) ? 1 : 2;
  if (cell == 0) ++occupied_count_;
  // Bridge beats Obstacle when primitives overlap.
  if (cell != 1) cell = next;
}

std::vector<Vec3i> WorldModel::cells_with_label(GroundTruthLabel label) const {
  const std::uint8_t want = (label == GroundTruthLabel::Bridge) ? 1 : 2;
  std::vector<Vec3i> out;
  for (int x = bounds_.min.x(); x <= bounds_.max.x(); ++x)
    for (int y = bounds_.min.y(); y <= bounds_.max.y(); ++y)
      for (int z = bounds_.min.z(); z <= bounds_.max.z(); ++z) {
        const Vec3i v(x, y, z);
        if (cells_[std::size_t(bounds_.linear_index(v))] == want) out.push_back(v);
      }
  return out;
}

WorldModel world_from_primitives(const std::vector<BoxShape>& shapes, double voxel_size,
                                 int pad_voxels, const std::optional<GridBounds>& bounds) {
  if (shapes.empty()) throw ValidationError("empty world");
  if (!(voxel_size > 0.0)) throw ValidationError("voxel_size must be positive");

  GridBounds gb;
  if (bounds) {
    gb = *bounds;
  } else {
    Vec3i lo, hi;
    box_index_range(shapes.front().min, shapes.front().max, voxel_size, lo, hi);
    gb.min = lo;
    gb.max = hi;
    for (const BoxShape& s : shapes) {
      box_index_range(s.min, s.max, voxel_size, lo, hi);
      gb.min = gb.min.cwiseMin(lo);
      gb.max = gb.max.cwiseMax(hi);
    }
    gb.min -= Vec3i::Constant(pad_voxels);
    gb.max += Vec3i::Constant(pad_voxels);
  }

  WorldModel world(voxel_size, gb);
  for (const BoxShape& s : shapes) {
    if (!(s.min.array() < s.max.array()).all())
      throw ValidationError("degenerate shape: min must be below max on every axis");
    Vec3i lo, hi;
    box_index_range(s.min, s.max, voxel_size, lo, hi);
    lo = lo.cwiseMax(gb.min);
    hi = hi.cwiseMin(gb.max);
    for (int x = lo.x(); x <= hi.x(); ++x)
      for (int y = lo.y(); y <= hi.y(); ++y)
        for (int z = lo.z(); z <= hi.z(); ++z) world.set_label({x, y, z}, s.label);
  }
  if (world.occupied_count() == 0) throw ValidationError("empty world");
  return world;
}

}  // namespace gatsbi
