#include "gatsbi/scenarios.hpp"

namespace gatsbi {

namespace {

ScenarioConfig base_config(const std::string& name, const Vec3& start, std::uint64_t seed,
                           const MeterBox& box) {
  ScenarioConfig c;
  c.name = name;
  c.voxel_size = 1.0;
  c.start_pose = {start, 0.0};
  c.view = {0.0, 2.0, 10.0, 0.0};
  c.lidar = {};
  c.dd = 2.0;
  c.rpt = 120.0;
  c.flight_speed = 2.0;
  c.scan_period = 1.0;
  c.rng_seed = seed;
  c.bounding_box = box;
  return c;
}

BoxShape bridge(const Vec3& min, const Vec3& max) {
  return {min, max, GroundTruthLabel::Bridge};
}

BoxShape obstacle(const Vec3& min, const Vec3& max) {
  return {min, max, GroundTruthLabel::Obstacle};
}

std::vector<BundledScenario> make_scenarios() {
  std::vector<BundledScenario> out;

  // Every bundled world follows one structural rule: supports and other
  // vertical members are two cells wide across the deck axis, so each of
  // their voxels keeps a side face whose on-axis viewing row escapes the
  // no-fly shadow directly under (or over) the deck. Three-wide members
  // would bury their centre column's viewing rows inside that shadow and
  // make full coverage impossible by construction.

  // Masonry arch: deck on two abutments with a crown block at midspan.
  {
    BundledScenario s;
    s.name = "arch";
    s.shapes = {
        obstacle({-10, -8, 0}, {28, 18, 1}),
        bridge({0, 2, 6}, {16, 7, 7}),
        bridge({0, 4, 2}, {2, 6, 6}),
        bridge({14, 4, 2}, {16, 6, 6}),
        bridge({7, 4, 4}, {9, 6, 6}),
    };
    s.config = base_config("arch", {-4.5, 4.5, 4.5}, 11,
                           MeterBox{{-7, -4, 1}, {23, 13, 13}});
    out.push_back(std::move(s));
  }

  // Covered bridge: walls and a roof over the middle bays only, so the deck
  // above each abutment still sees open sky; the covered bays are viewed
  // from below.
  {
    BundledScenario s;
    s.name = "covered";
    s.shapes = {
        obstacle({-10, -8, 0}, {26, 19, 1}),
        bridge({2, 3, 5}, {14, 8, 6}),
        bridge({5, 3, 6}, {11, 4, 10}),
        bridge({5, 7, 6}, {11, 8, 10}),
        bridge({5, 3, 10}, {11, 8, 11}),
        bridge({2, 4, 2}, {4, 6, 5}),
        bridge({12, 4, 2}, {14, 6, 5}),
    };
    s.config = base_config("covered", {-3.5, 5.5, 4.5}, 23,
                           MeterBox{{-7, -3, 1}, {21, 14, 14}});
    out.push_back(std::move(s));
  }

  // Box girder on two piers: the workhorse world for coverage comparisons.
  {
    BundledScenario s;
    s.name = "boxgirder";
    s.shapes = {
        obstacle({-10, -8, 0}, {26, 18, 1}),
        bridge({0, 3, 5}, {14, 8, 6}),
        bridge({3, 4, 2}, {5, 6, 5}),
        bridge({9, 4, 2}, {11, 6, 5}),
    };
    s.config = base_config("boxgirder", {-4.5, 5.5, 4.5}, 37,
                           MeterBox{{-7, -4, 1}, {21, 14, 12}});
    out.push_back(std::move(s));
  }

  // Iron truss: deck, two top chords, verticals every fourth bay, abutments.
  {
    BundledScenario s;
    s.name = "iron";
    std::vector<BoxShape> shapes = {
        obstacle({-10, -8, 0}, {30, 18, 1}),
        bridge({0, 3, 5}, {18, 8, 6}),
        bridge({0, 3, 8}, {18, 4, 9}),
        bridge({0, 7, 8}, {18, 8, 9}),
        bridge({0, 4, 2}, {2, 6, 5}),
        bridge({16, 4, 2}, {18, 6, 5}),
    };
    for (double x : {0.0, 4.0, 8.0, 12.0, 16.0}) {
      shapes.push_back(bridge({x, 3, 6}, {x + 1, 4, 8}));
      shapes.push_back(bridge({x, 7, 6}, {x + 1, 8, 8}));
    }
    s.shapes = std::move(shapes);
    s.config = base_config("iron", {-4.5, 5.5, 4.5}, 41,
                           MeterBox{{-7, -3, 1}, {25, 14, 12}});
    out.push_back(std::move(s));
  }

  // Steel towers: deck with two pylons set one bay in from the abutments,
  // plus unrelated obstacles in the survey box that a semantic planner
  // should ignore.
  {
    BundledScenario s;
    s.name = "steel";
    s.shapes = {
        obstacle({-12, -8, 0}, {30, 18, 1}),
        bridge({0, 3, 5}, {18, 8, 6}),
        bridge({3, 4, 6}, {5, 6, 10}),
        bridge({13, 4, 6}, {15, 6, 10}),
        bridge({0, 4, 2}, {2, 6, 5}),
        bridge({16, 4, 2}, {18, 6, 5}),
        obstacle({21, -2, 1}, {24, 2, 4}),
        obstacle({22, 10, 1}, {23, 11, 7}),
    };
    s.config = base_config("steel", {-4.5, 5.5, 4.5}, 53,
                           MeterBox{{-7, -3, 1}, {25, 14, 13}});
    out.push_back(std::move(s));
  }

  return out;
}

}  // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
  static const std::vector<BundledScenario> scenarios = make_scenarios();
  return scenarios;
}

const BundledScenario* find_bundled_scenario(const std::string& name) {
  for (const BundledScenario& s : bundled_scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

std::string bundled_scenario_text(const BundledScenario& s) {
  return serialize_scenario(s.shapes, s.config);
}

}  // namespace gatsbi
