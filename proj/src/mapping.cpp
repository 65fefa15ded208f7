#include "gatsbi/mapping.hpp"

#include "gatsbi/grid_geometry.hpp"

namespace gatsbi {

SemanticOccupancyGrid::SemanticOccupancyGrid(double voxel_size, const GridBounds& bounds)
    : voxel_size_(voxel_size), bounds_(bounds) {
  if (!(voxel_size > 0.0)) throw ValidationError("voxel_size must be positive");
  cells_.assign(std::size_t(bounds_.cell_count()), CellState::Unknown);
  counts_[static_cast<int>(CellState::Unknown)] = bounds_.cell_count();
}

CellState SemanticOccupancyGrid::state(const Vec3i& v) const {
  if (!bounds_.contains(v)) return CellState::Unknown;
  return cells_[std::size_t(lin(v))];
}

bool SemanticOccupancyGrid::observe_free(const Vec3i& v) {
  if (!bounds_.contains(v)) return false;
  CellState& cell = cells_[std::size_t(lin(v))];
  if (cell != CellState::Unknown) return false;  // occupied evidence wins
  --counts_[static_cast<int>(cell)];
  cell = CellState::Free;
  ++counts_[static_cast<int>(cell)];
  ++mutation_counter_;
  return true;
}

bool SemanticOccupancyGrid::observe_hit(const Vec3i& v, GroundTruthLabel label) {
  if (!bounds_.contains(v)) return false;
  CellState& cell = cells_[std::size_t(lin(v))];
  if (is_occupied(cell)) return false;  // first occupied observation sticks
  const CellState next = (label == GroundTruthLabel::Bridge) ? CellState::BridgeNotInspected
                                                             : CellState::Obstacle;
  --counts_[static_cast<int>(cell)];
  cell = next;
  ++counts_[static_cast<int>(cell)];
  if (next == CellState::BridgeNotInspected) bn_cells_.insert(v);
  ++mutation_counter_;
  return true;
}

void SemanticOccupancyGrid::mark_inspected(const Vec3i& v) {
  if (!bounds_.contains(v) || state(v) != CellState::BridgeNotInspected)
    throw ValidationError("not awaiting inspection");
  CellState& cell = cells_[std::size_t(lin(v))];
  --counts_[static_cast<int>(cell)];
  cell = CellState::BridgeInspected;
  ++counts_[static_cast<int>(cell)];
  bn_cells_.erase(v);
  ++mutation_counter_;
}

VoxelSets SemanticOccupancyGrid::voxel_sets() const {
  VoxelSets sets;
  sets.free.reserve(std::size_t(n_free()));
  sets.obstacle.reserve(std::size_t(n_obstacle()));
  sets.bridge_not_inspected.reserve(std::size_t(n_bridge_not_inspected()));
  sets.bridge_inspected.reserve(std::size_t(n_bridge_inspected()));
  for (int x = bounds_.min.x(); x <= bounds_.max.x(); ++x)
    for (int y = bounds_.min.y(); y <= bounds_.max.y(); ++y)
      for (int z = bounds_.min.z(); z <= bounds_.max.z(); ++z) {
        const Vec3i v(x, y, z);
        switch (cells_[std::size_t(lin(v))]) {
          case CellState::Free: sets.free.push_back(v); break;
          case CellState::Obstacle: sets.obstacle.push_back(v); break;
          case CellState::BridgeNotInspected: sets.bridge_not_inspected.push_back(v); break;
          case CellState::BridgeInspected: sets.bridge_inspected.push_back(v); break;
          case CellState::Unknown: break;
        }
      }
  return sets;
}

void SemanticOccupancyGrid::write_csv(std::ostream& os) const {
  os << "ix,iy,iz,state\n";
  for (int x = bounds_.min.x(); x <= bounds_.max.x(); ++x)
    for (int y = bounds_.min.y(); y <= bounds_.max.y(); ++y)
      for (int z = bounds_.min.z(); z <= bounds_.max.z(); ++z) {
        const CellState s = cells_[std::size_t(lin({x, y, z}))];
        if (s == CellState::Unknown) continue;
        os << x << ',' << y << ',' << z << ',' << to_string(s) << '\n';
      }
}

IntegrationReport integrate_scan(SemanticOccupancyGrid& grid, const LabeledScan& scan) {
  if (!grid.bounds().contains(voxel_of(scan.origin.position, grid.voxel_size())))
    throw ValidationError("scan origin outside grid bounds");

  IntegrationReport report;
  const Vec3i origin_voxel = voxel_of(scan.origin.position, grid.voxel_size());

  const auto carve = [&](const Vec3i& v) {
    if (v == origin_voxel) return;  // the sensor's own cell is not evidence
    if (grid.observe_free(v)) ++report.newly_free;
  };

  for (const LidarReturn& ret : scan.returns) {
    traverse_segment(scan.origin.position, ret.point, grid.voxel_size(), grid.bounds(),
                     [&](const Vec3i& v, double, double) {
                       if (v != ret.voxel) carve(v);
                       return true;
                     });
    if (grid.observe_hit(ret.voxel, ret.label)) {
      if (grid.state(ret.voxel) == CellState::BridgeNotInspected)
        ++report.newly_bridge;
      else
        ++report.newly_obstacle;
    }
  }
  for (const Vec3& dir : scan.miss_directions) {
    traverse_segment(scan.origin.position, dir, scan.range_max, grid.voxel_size(), grid.bounds(),
                     [&](const Vec3i& v, double, double) {
                       carve(v);
                       return true;
                     });
  }
  return report;
}

}  // namespace gatsbi
