#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gatsbi/sensing.hpp"
#include "gatsbi/types.hpp"
#include "gatsbi/view.hpp"
#include "gatsbi/world.hpp"

namespace gatsbi {

struct MeterBox {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};
};

struct ScenarioConfig {
  std::string name = "scenario";
  double voxel_size = 1.0;
  Pose start_pose;
  ViewSpec view;
  LidarSpec lidar;
  double dd = 2.0;            // meters; detour discrepancy threshold
  double rpt = 120.0;         // simulated flight seconds per tour
  double flight_speed = 2.0;  // m/s
  double scan_period = 1.0;   // simulated seconds between scans
  std::uint64_t rng_seed = 0;
  std::optional<MeterBox> bounding_box;  // exploration box for the baseline

  // Knobs without scenario-file fields.
  int clearance_voxels = 1;
  bool opportunistic = false;
};

struct Scenario {
  WorldModel world;
  ScenarioConfig config;
};

// Parses a scenario document (JSON). Every field of the schema is required
// except bounding_box; unknown fields are rejected by name. The world bounds
// are the shapes plus start pose plus bounding box, padded by d_max and a two
// voxel margin so the viewing band always fits inside the grid.
Scenario load_world(const std::string& text, const std::string& name = "scenario");

// Inverse of load_world for generated scenarios; stable field order.
std::string serialize_scenario(const std::vector<BoxShape>& shapes, const ScenarioConfig& config);

// Computes the padded world bounds used by load_world.
GridBounds derive_bounds(const std::vector<BoxShape>& shapes, const ScenarioConfig& config);

}  // namespace gatsbi
