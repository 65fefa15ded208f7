#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gatsbi/types.hpp"

namespace gatsbi {

// Axis-aligned box in meters, half-open per axis: a voxel belongs to the box
// when its center lies in [min, max) on every axis.
struct BoxShape {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};
  GroundTruthLabel label = GroundTruthLabel::Obstacle;
};

// Voxelized ground truth. Cells outside the stored bounds are empty.
class WorldModel {
 public:
  WorldModel(double voxel_size, const GridBounds& bounds);

  double voxel_size() const { return voxel_size_; }
  const GridBounds& bounds() const { return bounds_; }

  std::optional<GroundTruthLabel> label(const Vec3i& v) const;
  bool is_empty(const Vec3i& v) const { return !label(v).has_value(); }
  void set_label(const Vec3i& v, GroundTruthLabel label);

  std::int64_t occupied_count() const { return occupied_count_; }
  // Sorted lexicographically by (x, y, z) index.
  std::vector<Vec3i> cells_with_label(GroundTruthLabel label) const;

 private:
  double voxel_size_;
  GridBounds bounds_;
  std::vector<std::uint8_t> cells_;  // 0 empty, 1 bridge, 2 obstacle
  std::int64_t occupied_count_ = 0;
};

// Rasterizes box primitives into a voxel world. Bridge beats Obstacle where
// boxes overlap. By default the bounds cover the shapes plus pad_voxels of
// margin on every side. Throws ValidationError on an empty shape list.
WorldModel world_from_primitives(const std::vector<BoxShape>& shapes, double voxel_size,
                                 int pad_voxels = 2,
                                 const std::optional<GridBounds>& bounds = std::nullopt);

}  // namespace gatsbi
