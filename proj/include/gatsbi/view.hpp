#pragma once

#include <vector>

#include "gatsbi/mapping.hpp"
#include "gatsbi/types.hpp"
#include "gatsbi/world.hpp"

namespace gatsbi {

struct ViewSpec {
  double apex_deg = 0.0;      // full apex angle of the viewing cone
  double d_min = 2.0;         // meters, face center to viewpoint
  double d_max = 10.0;        // meters
  double angle_tol_deg = 0.0; // slack added to the half apex angle
};

// A (viewpoint, target face) pairing: stand at the free voxel's center and a
// specific face of a bridge voxel is inspectable from there.
struct Candidate {
  Vec3i free_voxel{Vec3i::Zero()};
  Vec3i bridge_voxel{Vec3i::Zero()};
  Face face = Face::PosX;
  Pose viewpoint_pose;  // at the free voxel center, yawed toward the face
};

// True when all four viewing conditions hold against the belief grid:
//  (a) d_min <= |free center - face center| <= d_max,
//  (b) the angle between the face normal and the ray face->viewpoint is at
//      most apex/2 + tolerance,
//  (c) the sight segment crosses only Free cells apart from the target
//      (Unknown blocks), and
//  (d) the cell the face opens into is not occupied.
// Returns false on degenerate input (viewpoint cell not Free, target not a
// bridge cell) rather than throwing.
bool is_viewable(const SemanticOccupancyGrid& grid, const Vec3i& free_voxel,
                 const Vec3i& bridge_voxel, Face face, const ViewSpec& spec);

// Enumerates every viewable (free voxel, BridgeNotInspected voxel, face)
// triple, ordered by bridge voxel, then face, then free voxel.
std::vector<Candidate> generate_viewpoints(const SemanticOccupancyGrid& grid,
                                           const ViewSpec& spec);

// Belief grid an ideal mapper would produce: every world cell known, bridge
// cells not yet inspected.
SemanticOccupancyGrid full_knowledge_grid(const WorldModel& world);

// Ground-truth oracle: bridge voxels with at least one viewable face for some
// empty-cell viewpoint, assuming full knowledge. Sorted lexicographically.
// This is the denominator for inspection percentages.
std::vector<Vec3i> inspectable_set(const WorldModel& world, const ViewSpec& spec);

}  // namespace gatsbi
