#pragma once

#include <cstdint>
#include <ostream>
#include <set>
#include <vector>

#include "gatsbi/sensing.hpp"
#include "gatsbi/types.hpp"

namespace gatsbi {

struct VoxelSets {
  std::vector<Vec3i> free;
  std::vector<Vec3i> obstacle;
  std::vector<Vec3i> bridge_not_inspected;
  std::vector<Vec3i> bridge_inspected;
};

struct IntegrationReport {
  int newly_free = 0;
  int newly_obstacle = 0;
  int newly_bridge = 0;
};

// Online semantic belief grid. Occupied evidence beats free evidence: once a
// cell is Obstacle or Bridge* it never reverts to Free, BridgeInspected is
// absorbing, and conflicting occupied labels keep the first observation.
class SemanticOccupancyGrid {
 public:
  SemanticOccupancyGrid(double voxel_size, const GridBounds& bounds);

  double voxel_size() const { return voxel_size_; }
  const GridBounds& bounds() const { return bounds_; }

  // Out-of-bounds cells read as Unknown.
  CellState state(const Vec3i& v) const;

  std::int64_t count(CellState s) const { return counts_[static_cast<int>(s)]; }
  std::int64_t n_free() const { return count(CellState::Free); }
  std::int64_t n_obstacle() const { return count(CellState::Obstacle); }
  std::int64_t n_bridge_not_inspected() const { return count(CellState::BridgeNotInspected); }
  std::int64_t n_bridge_inspected() const { return count(CellState::BridgeInspected); }

  // Bumped on every cell-state change; lets callers detect knowledge growth.
  std::uint64_t mutation_counter() const { return mutation_counter_; }

  // Free evidence for a pass-through cell. Returns true if the cell changed.
  bool observe_free(const Vec3i& v);
  // Occupied evidence for a hit cell. Returns true if the cell changed.
  bool observe_hit(const Vec3i& v, GroundTruthLabel label);

  // BridgeNotInspected -> BridgeInspected. Throws ValidationError with
  // "not awaiting inspection" otherwise.
  void mark_inspected(const Vec3i& v);

  // Live BridgeNotInspected cells in lexicographic order.
  const std::set<Vec3i, LexLess>& bridge_not_inspected_cells() const { return bn_cells_; }

  // All four known-state partitions, each sorted lexicographically.
  VoxelSets voxel_sets() const;

  // Snapshot rows "ix,iy,iz,state" for every known cell, header included.
  void write_csv(std::ostream& os) const;

 private:
  std::int64_t lin(const Vec3i& v) const { return bounds_.linear_index(v); }

  double voxel_size_;
  GridBounds bounds_;
  std::vector<CellState> cells_;
  std::array<std::int64_t, 5> counts_{};
  std::set<Vec3i, LexLess> bn_cells_;
  std::uint64_t mutation_counter_ = 0;
};

// Folds one scan into the belief. Every voxel the ray actually crosses before
// its hit voxel becomes Free (the sensor's own voxel is left alone), the hit
// voxel takes its labeled occupied state, and misses carve to range end.
// Throws ValidationError if the scan origin is out of bounds.
IntegrationReport integrate_scan(SemanticOccupancyGrid& grid, const LabeledScan& scan);

}  // namespace gatsbi
