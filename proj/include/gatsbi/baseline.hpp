#pragma once

#include <optional>
#include <set>
#include <vector>

#include "gatsbi/executor.hpp"
#include "gatsbi/mapping.hpp"
#include "gatsbi/scenario.hpp"
#include "gatsbi/types.hpp"

namespace gatsbi {

// The exploration box in voxel indices: cells whose centers lie inside the
// scenario bounding box (whole grid when none is set), clipped to the grid.
GridBounds exploration_box(const SemanticOccupancyGrid& grid, const ScenarioConfig& config);

// Free cells inside the box with at least one Unknown 6-neighbor also inside
// the box. Lexicographic order.
std::vector<Vec3i> detect_frontiers(const SemanticOccupancyGrid& grid, const GridBounds& box);

struct FrontierTarget {
  Vec3i cell{Vec3i::Zero()};
  double distance = 0.0;
  GridPath path;
};

// Nearest reachable frontier by flyable-grid path distance, ties toward the
// lower linear cell index. Cells in `skip` are not considered.
std::optional<FrontierTarget> nearest_frontier(const SemanticOccupancyGrid& grid,
                                               const Vec3& from, int clearance,
                                               const std::vector<Vec3i>& frontiers,
                                               const std::set<Vec3i, LexLess>& skip);

// One exploration hop: fly to the nearest reachable frontier, scanning en
// route and on arrival. Frontiers that survive a visit without any knowledge
// gain go dormant until the map changes. Returns false when no frontier is
// actionable.
bool frontier_hop(MissionState& state, const WorldModel& world, const ScenarioConfig& config,
                  const GridBounds& box, const std::string& phase, bool opportunistic,
                  std::set<Vec3i, LexLess>& dormant);

// Nearest-frontier exploration of the bounding box with per-waypoint
// opportunistic inspection credit. Shares sensing, mapping, flight, and
// credit code with the planner mission; only target selection differs.
// A non-null final_grid receives the belief at termination.
MissionLog run_frontier_mission(const WorldModel& world, const ScenarioConfig& config,
                                SemanticOccupancyGrid* final_grid = nullptr);

}  // namespace gatsbi
