#pragma once

#include <vector>

#include "gatsbi/mapping.hpp"
#include "gatsbi/types.hpp"

namespace gatsbi {

enum class PlanStatus { Ok, EndpointBlocked, Unreachable };

struct GridPath {
  std::vector<Vec3> waypoints;  // voxel centers, start first
  double length = 0.0;          // meters
};

struct PlanResult {
  PlanStatus status = PlanStatus::Unreachable;
  GridPath path;
};

// A cell is flyable when it is Free and no occupied cell lies within
// `clearance` voxels (Chebyshev). Unknown blocks flight but is not inflated.
bool is_flyable(const SemanticOccupancyGrid& grid, const Vec3i& v, int clearance);

// A* over the 26-connected flyable subgrid with edge weights voxel_size times
// {1, sqrt2, sqrt3}. Deterministic: f-ties break toward the lower linear cell
// index. EndpointBlocked when the destination cell is not flyable or the
// source cell is not known Free; the source is exempt from the clearance rule
// because the vehicle already occupies it and must be able to leave.
PlanResult plan_path(const SemanticOccupancyGrid& grid, const Vec3& from, const Vec3& to,
                     int clearance);

// Same computation, kept for callers that only need the length.
PlanResult path_distance(const SemanticOccupancyGrid& grid, const Vec3& from, const Vec3& to,
                         int clearance);

}  // namespace gatsbi
