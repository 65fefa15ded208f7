#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "gatsbi/gtsp.hpp"
#include "gatsbi/mapping.hpp"
#include "gatsbi/nav.hpp"
#include "gatsbi/scenario.hpp"
#include "gatsbi/types.hpp"
#include "gatsbi/world.hpp"

namespace gatsbi {

enum class TourOutcome { Completed, TimedOut, Invalidated };

struct TimelineRow {
  double clock_s = 0.0;
  double distance_m = 0.0;
  std::int64_t v_f = 0, v_o = 0, v_bn = 0, v_bi = 0;
  double pct_inspected = 0.0;
  std::string phase;
};

struct TimingRow {
  int replan_idx = 0;
  double non_gtsp_s = 0.0;  // wall seconds: perception, viewpoints, instance
  double gtsp_s = 0.0;      // wall seconds: solver
  double flight_s = 0.0;    // simulated flight seconds since the previous row
};

// One flown tour edge, captured when the lazy check let it through.
struct EdgeAudit {
  double instance_cost = 0.0;  // edge cost the tour was solved with
  double path_length = 0.0;    // collision-aware length actually flown
  double euclid = 0.0;         // straight-line pose-to-vertex distance
  double dd = 0.0;             // detour threshold in force at decision time
};

// One vertex of a solved tour, recorded for determinism checks.
struct TourStep {
  bool is_start = false;
  Vec3i free_voxel{Vec3i::Zero()};
  Vec3i bridge_voxel{Vec3i::Zero()};
  Face face = Face::PosX;
};

struct MissionLog {
  std::vector<TimelineRow> timeline;
  std::vector<TimingRow> timing;

  // Audit captures, not part of the CSV contract.
  std::vector<Vec3> trajectory;             // every waypoint actually flown
  std::vector<EdgeAudit> edge_audits;
  std::vector<std::vector<TourStep>> tours; // one sequence per solver run
  std::vector<Vec3i> inspections;           // in marking order

  std::int64_t inspectable_count = 0;
  double final_percent = 0.0;
  double total_distance_m = 0.0;
  double total_time_s = 0.0;
  std::vector<Vec3i> uninspectable_remainder;  // BN cells left at termination

  void write_timeline_csv(std::ostream& os) const;
  void write_timing_csv(std::ostream& os) const;
};

struct MissionState {
  MissionState(double voxel_size, const GridBounds& bounds, std::uint64_t seed)
      : grid(voxel_size, bounds), rng(seed) {}

  SemanticOccupancyGrid grid;
  Pose pose;
  double clock_s = 0.0;
  double distance_m = 0.0;
  double next_scan_clock = 0.0;
  std::mt19937_64 rng;
  MissionLog log;
};

// Appends one timeline row capturing the current clock, distance, and counts.
void log_timeline(MissionState& state, const std::string& phase);

// Fills the summary fields (remainder, totals, final percent) and appends the
// terminal timeline row.
void finalize_mission_log(MissionState& state);

// Scans from the current pose, integrates, and appends a timeline row.
IntegrationReport scan_and_log(MissionState& state, const WorldModel& world,
                               const ScenarioConfig& config, const std::string& phase);

// Marks every BridgeNotInspected voxel with a face viewable from the cell the
// pose occupies. The shared inspection-credit overlay. Returns marks made.
int credit_from_cell(MissionState& state, const ScenarioConfig& config);

// Flies the path at flight_speed, scanning every scan_period simulated
// seconds along the way. With opportunistic set, runs the credit overlay at
// each waypoint. Both planners fly through this one function.
void fly_segment(MissionState& state, const GridPath& path, const WorldModel& world,
                 const ScenarioConfig& config, const std::string& phase, bool opportunistic);

enum class EdgeDecision { Proceed, Replan, DropVertex };

struct LazyCheckResult {
  EdgeDecision decision = EdgeDecision::Proceed;
  GridPath path;      // populated on Proceed
  int vertex = -1;    // the vertex checked (DropVertex: remove this one)
};

// The full pipeline: bootstrap, then plan/execute rounds until no bridge
// voxel awaits inspection or two stagnant rounds declare the rest
// uninspectable.
class Mission {
 public:
  Mission(const WorldModel& world, const ScenarioConfig& config);

  // Initial scan, then frontier hops until the bridge shows up. Throws
  // MissionError("bridge not observable") if frontiers run out first.
  void bootstrap();

  // Regenerates viewpoints over V_BN, builds and solves the instance, and
  // logs a timing row. Returns nothing when no candidates exist.
  std::optional<Tour> plan_iteration();

  // Executes a tour with lazy edge checks, arrival re-validation, and the
  // replan timer.
  TourOutcome run_tour(Tour tour);

  // Checks the edge from the tour position to the next vertex against the
  // current map: unreachable vertices are dropped, a detour discrepancy
  // beyond DD installs the true cost and asks for a replan.
  LazyCheckResult lazy_edge_check(const Tour& tour, int position);

  MissionLog run();

  MissionState& state() { return state_; }
  const MissionState& state() const { return state_; }
  const GtspInstance& instance() const { return instance_; }

 private:
  Tour resolve_from_pose(const SolveBudget& budget, double extra_non_gtsp_s = 0.0);
  void rebuild_instance();
  void record_tour(const Tour& tour);
  void push_timing_row(double non_gtsp_s, double gtsp_s);
  void apply_override_cache();
  void cache_edge_cost(const Vec3& a, const Vec3& b, double cost);

  const WorldModel& world_;
  ScenarioConfig config_;
  MissionState state_;

  std::vector<Candidate> session_candidates_;  // active pool for this round
  GtspInstance instance_;
  int replan_counter_ = 0;
  double clock_at_last_timing_row_ = 0.0;
  std::map<std::pair<std::int64_t, std::int64_t>, double> edge_cost_cache_;
  std::uint64_t cache_writes_ = 0;  // bumped when an override value changes
};

MissionLog run_mission(const WorldModel& world, const ScenarioConfig& config);

}  // namespace gatsbi
