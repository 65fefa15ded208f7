#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gatsbi/executor.hpp"
#include "gatsbi/scenario.hpp"
#include "gatsbi/types.hpp"
#include "gatsbi/view.hpp"
#include "gatsbi/world.hpp"
#include "support.hpp"

using namespace gatsbi;

namespace {

struct TestWorld {
  WorldModel world;
  ScenarioConfig config;
};

ScenarioConfig micro_config() {
  ScenarioConfig config;
  config.name = "micro";
  config.voxel_size = 1.0;
  config.start_pose = Pose{Vec3(-3.5, -3.5, 2.5), 0.0};
  config.view = ViewSpec{0.0, 2.0, 6.0, 0.0};
  config.lidar.range_max = 25.0;
  config.lidar.azimuth_steps = 90;
  config.lidar.elevation_steps = 9;
  config.dd = 2.0;
  config.rpt = 120.0;
  config.flight_speed = 2.0;
  config.scan_period = 1.0;
  config.rng_seed = 5;
  config.bounding_box = MeterBox{Vec3(-6, -6, 0), Vec3(10, 10, 8)};
  return config;
}

// A single-column bridge pillar, three voxels tall, on an obstacle slab. The
// bootstrap scan from the start pose already sees every pillar voxel, and each
// has a clear on-axis side or top view, so full inspection is feasible.
TestWorld pillar_world() {
  const std::vector<BoxShape> shapes = {
      {Vec3(-6, -6, 0), Vec3(10, 10, 1), GroundTruthLabel::Obstacle},
      {Vec3(2, 2, 2), Vec3(3, 3, 5), GroundTruthLabel::Bridge},
  };
  ScenarioConfig config = micro_config();
  WorldModel world =
      world_from_primitives(shapes, config.voxel_size, 0, derive_bounds(shapes, config));
  return {std::move(world), std::move(config)};
}

// The pillar world plus a bridge voxel whose only legal viewpoints (a
// zero-apex cone with d in [2,3] admits just the six on-axis cells at 2.5 m)
// are all filled with obstacle. The voxel is visible to the lidar but no
// admissible viewpoint exists even with full knowledge.
TestWorld trapped_world() {
  std::vector<BoxShape> shapes = {
      {Vec3(-6, -6, 0), Vec3(10, 10, 1), GroundTruthLabel::Obstacle},
      {Vec3(2, 2, 2), Vec3(3, 3, 5), GroundTruthLabel::Bridge},
      {Vec3(-4, -1, 3), Vec3(-3, 0, 4), GroundTruthLabel::Bridge},  // the trapped voxel
  };
  const Vec3i t(-4, -1, 3);
  for (const Vec3i& off : {Vec3i(3, 0, 0), Vec3i(-3, 0, 0), Vec3i(0, 3, 0), Vec3i(0, -3, 0),
                           Vec3i(0, 0, 3), Vec3i(0, 0, -3)}) {
    const Vec3 lo = (t + off).cast<double>();
    shapes.push_back({lo, lo + Vec3(1, 1, 1), GroundTruthLabel::Obstacle});
  }
  ScenarioConfig config = micro_config();
  config.view = ViewSpec{0.0, 2.0, 3.0, 0.0};
  config.start_pose = Pose{Vec3(5.5, -3.5, 3.5), 0.0};
  WorldModel world =
      world_from_primitives(shapes, config.voxel_size, 0, derive_bounds(shapes, config));
  return {std::move(world), std::move(config)};
}

}  // namespace

TEST_CASE("the mission inspects every inspectable voxel of the pillar world") {
  const TestWorld tw = pillar_world();
  REQUIRE(inspectable_set(tw.world, tw.config.view).size() == 3);

  const MissionLog log = run_mission(tw.world, tw.config);
  CHECK(log.inspectable_count == 3);
  CHECK(log.final_percent == 100.0);
  CHECK(log.uninspectable_remainder.empty());
  CHECK(log.inspections.size() == 3);
  CHECK(log.total_distance_m > 0.0);
  CHECK(log.total_time_s > 0.0);

  // Each voxel inspected exactly once, and only truth-bridge voxels.
  std::set<Vec3i, LexLess> seen;
  for (const Vec3i& v : log.inspections) {
    CHECK(seen.insert(v).second);
    REQUIRE(tw.world.label(v).has_value());
    CHECK(*tw.world.label(v) == GroundTruthLabel::Bridge);
  }

  // The marked set is exactly the ground-truth inspectable set.
  const std::vector<Vec3i> sorted_marks(seen.begin(), seen.end());
  CHECK(sorted_marks == inspectable_set(tw.world, tw.config.view));
}

TEST_CASE("timeline and trajectory keep the safety invariants") {
  const TestWorld tw = pillar_world();
  const MissionLog log = run_mission(tw.world, tw.config);

  REQUIRE(!log.timeline.empty());
  CHECK(log.timeline.front().phase == "bootstrap");
  CHECK(log.timeline.back().phase == "end");
  const std::int64_t cells = tw.world.bounds().cell_count();
  for (std::size_t i = 0; i < log.timeline.size(); ++i) {
    const TimelineRow& r = log.timeline[i];
    CHECK(r.v_f + r.v_o + r.v_bn + r.v_bi <= cells);
    CHECK(r.v_bi >= 0);
    if (i > 0) {
      CHECK(r.clock_s >= log.timeline[i - 1].clock_s);
      CHECK(r.distance_m >= log.timeline[i - 1].distance_m);
      CHECK(r.v_bi >= log.timeline[i - 1].v_bi);  // inspected is monotone
    }
  }
  CHECK(log.timeline.back().v_bn == 0);
  CHECK(log.timeline.back().pct_inspected == 100.0);

  // The flown trajectory stays in empty truth cells and moves one cell at a
  // time (consecutive plans share their junction waypoint).
  REQUIRE(log.trajectory.size() >= 2);
  for (std::size_t i = 0; i < log.trajectory.size(); ++i) {
    const Vec3i v = voxel_of(log.trajectory[i], tw.world.voxel_size());
    CHECK(tw.world.bounds().contains(v));
    CHECK(!tw.world.label(v).has_value());
    if (i > 0) {
      const Vec3i prev = voxel_of(log.trajectory[i - 1], tw.world.voxel_size());
      CHECK((v - prev).cwiseAbs().maxCoeff() <= 1);
    }
  }

  // Every flown edge respected the detour bound it was admitted under, and
  // solver costs never undercut the straight line.
  REQUIRE(!log.edge_audits.empty());
  for (const EdgeAudit& audit : log.edge_audits) {
    CHECK(audit.path_length <= audit.instance_cost + audit.dd + 1e-6);
    CHECK(audit.instance_cost >= audit.euclid - 1e-6);
  }
}

TEST_CASE("missions are deterministic end to end") {
  const TestWorld tw = pillar_world();
  const MissionLog a = run_mission(tw.world, tw.config);
  const MissionLog b = run_mission(tw.world, tw.config);

  std::ostringstream csv_a, csv_b;
  a.write_timeline_csv(csv_a);
  b.write_timeline_csv(csv_b);
  CHECK(csv_a.str() == csv_b.str());

  CHECK(a.total_distance_m == b.total_distance_m);
  CHECK(a.total_time_s == b.total_time_s);
  CHECK(a.inspections == b.inspections);

  REQUIRE(a.tours.size() == b.tours.size());
  for (std::size_t t = 0; t < a.tours.size(); ++t) {
    REQUIRE(a.tours[t].size() == b.tours[t].size());
    for (std::size_t i = 0; i < a.tours[t].size(); ++i) {
      CHECK(a.tours[t][i].is_start == b.tours[t][i].is_start);
      CHECK(a.tours[t][i].free_voxel == b.tours[t][i].free_voxel);
      CHECK(a.tours[t][i].bridge_voxel == b.tours[t][i].bridge_voxel);
      CHECK(a.tours[t][i].face == b.tours[t][i].face);
    }
  }

  // CSV headers are part of the contract.
  std::ostringstream head;
  a.write_timeline_csv(head);
  CHECK(head.str().substr(0, head.str().find('\n')) ==
        "clock_s,distance_m,v_free,v_obstacle,v_bridge_ni,v_bridge_i,pct_inspected,phase");
  std::ostringstream timing;
  a.write_timing_csv(timing);
  CHECK(timing.str().substr(0, timing.str().find('\n')) ==
        "replan_idx,non_gtsp_s,gtsp_s,flight_s");
}

TEST_CASE("a short replan timer cuts tours but the mission still finishes") {
  TestWorld tw = pillar_world();
  tw.config.rpt = 0.5;

  Mission probe(tw.world, tw.config);
  probe.bootstrap();
  auto tour = probe.plan_iteration();
  REQUIRE(tour.has_value());
  CHECK(probe.run_tour(*tour) == TourOutcome::TimedOut);

  const MissionLog log = run_mission(tw.world, tw.config);
  CHECK(log.final_percent == 100.0);
  CHECK(log.tours.size() >= 3);  // one solve per timed-out round at minimum
}

TEST_CASE("lazy edge checks drop unreachable vertices and flag detours") {
  TestWorld tw = pillar_world();
  tw.config.dd = 0.5;
  Mission mission(tw.world, tw.config);
  mission.bootstrap();
  auto tour = mission.plan_iteration();
  REQUIRE(tour.has_value());
  REQUIRE(tour->vertex_order.size() >= 2);

  const int v1 = tour->vertex_order[1];
  const Vec3 target = mission.instance().vertices[v1].position;
  const Vec3 from = mission.state().pose.position;
  const Vec3i from_cell = voxel_of(from, 1.0);

  SUBCASE("a wall across the corridor forces a replan with the true cost") {
    // Drop a belief-only wall square two cells ahead of the vehicle,
    // perpendicular to the dominant axis of the segment and centered where the
    // straight line crosses that plane. Cells near either endpoint are left
    // untouched so the clearance rule cannot void the endpoints themselves.
    const Vec3i target_cell = voxel_of(target, 1.0);
    const Vec3i delta = target_cell - from_cell;
    Eigen::Index axis = 0;
    delta.cwiseAbs().maxCoeff(&axis);
    const int step = delta[axis] > 0 ? 1 : -1;
    const int plane = from_cell[axis] + 2 * step;
    const double f = double(plane - from_cell[axis]) / double(delta[axis]);
    const Vec3i center = voxel_of(from + (target - from) * f, 1.0);
    const Eigen::Index a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    int walled = 0;
    for (int d1 = -4; d1 <= 4; ++d1)
      for (int d2 = -4; d2 <= 4; ++d2) {
        Vec3i w = center;
        w[axis] = plane;
        w[a1] += d1;
        w[a2] += d2;
        if ((w - from_cell).cwiseAbs().maxCoeff() <= tw.config.clearance_voxels) continue;
        if ((w - target_cell).cwiseAbs().maxCoeff() <= tw.config.clearance_voxels) continue;
        if (mission.state().grid.bounds().contains(w) &&
            !is_occupied(mission.state().grid.state(w)))
          walled += mission.state().grid.observe_hit(w, GroundTruthLabel::Obstacle);
      }
    REQUIRE(walled > 0);

    const double before = mission.instance().cost(tour->vertex_order[0], v1);
    const LazyCheckResult check = mission.lazy_edge_check(*tour, 0);
    REQUIRE(check.decision == EdgeDecision::Replan);
    const double after = mission.instance().cost(tour->vertex_order[0], v1);
    CHECK(after > before + tw.config.dd);

    // With the true cost installed the same edge now passes the check.
    const LazyCheckResult again = mission.lazy_edge_check(*tour, 0);
    CHECK(again.decision == EdgeDecision::Proceed);
    CHECK(again.path.length == doctest::Approx(after).epsilon(1e-12));
  }

  SUBCASE("an unreachable viewpoint is dropped") {
    // Make the target cell fail the clearance rule with one adjacent block.
    Vec3i beside = voxel_of(target, 1.0) + Vec3i(0, 0, 1);
    if (beside == from_cell || !mission.state().grid.bounds().contains(beside))
      beside = voxel_of(target, 1.0) + Vec3i(0, 0, -1);
    REQUIRE(mission.state().grid.observe_hit(beside, GroundTruthLabel::Obstacle));
    const LazyCheckResult check = mission.lazy_edge_check(*tour, 0);
    CHECK(check.decision == EdgeDecision::DropVertex);
    CHECK(check.vertex == v1);
  }
}

TEST_CASE("a voxel with no admissible viewpoint is reported, not spun on") {
  const TestWorld tw = trapped_world();
  // With full knowledge the trapped voxel has no viewpoint at all, so it does
  // not count toward the denominator...
  const std::vector<Vec3i> inspectable = inspectable_set(tw.world, tw.config.view);
  CHECK(std::find(inspectable.begin(), inspectable.end(), Vec3i(-4, -1, 3)) ==
        inspectable.end());

  const MissionLog log = run_mission(tw.world, tw.config);
  // ... and the mission ends honestly: everything reachable inspected, the
  // trapped voxel reported as remainder.
  CHECK(log.final_percent == 100.0);
  REQUIRE(log.uninspectable_remainder.size() == 1);
  CHECK(log.uninspectable_remainder[0] == Vec3i(-4, -1, 3));
  for (const Vec3i& v : log.inspections) CHECK(v != Vec3i(-4, -1, 3));
}

TEST_CASE("constructor and bootstrap guard their preconditions") {
  const TestWorld tw = pillar_world();

  ScenarioConfig bad_voxel = tw.config;
  bad_voxel.voxel_size = 0.5;
  CHECK_THROWS_WITH_AS(Mission(tw.world, bad_voxel),
                       "world and config disagree on voxel size", ValidationError);

  ScenarioConfig buried = tw.config;
  buried.start_pose.position = Vec3(2.5, 2.5, 2.5);  // inside the pillar
  CHECK_THROWS_WITH_AS(Mission(tw.world, buried), "start pose must sit in an empty world cell",
                       ValidationError);

  ScenarioConfig outside = tw.config;
  outside.start_pose.position = Vec3(500.0, 0.0, 0.0);
  CHECK_THROWS_AS(Mission(tw.world, outside), ValidationError);

  // A world with no bridge at all: exploration exhausts and reports failure.
  const std::vector<BoxShape> shapes = {
      {Vec3(-2, -2, 0), Vec3(2, 2, 1), GroundTruthLabel::Obstacle}};
  ScenarioConfig cfg = micro_config();
  cfg.bounding_box = MeterBox{Vec3(-4, -4, 0), Vec3(4, 4, 4)};
  cfg.start_pose = Pose{Vec3(-0.5, -0.5, 2.5), 0.0};
  const WorldModel empty_world =
      world_from_primitives(shapes, cfg.voxel_size, 0, derive_bounds(shapes, cfg));
  Mission mission(empty_world, cfg);
  CHECK_THROWS_WITH_AS(mission.bootstrap(), "bridge not observable", MissionError);
}
