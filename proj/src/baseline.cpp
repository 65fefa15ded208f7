#include "gatsbi/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gatsbi/nav.hpp"
#include "gatsbi/view.hpp"

namespace gatsbi {

GridBounds exploration_box(const SemanticOccupancyGrid& grid, const ScenarioConfig& config) {
  GridBounds box = grid.bounds();
  if (config.bounding_box) {
    const double s = grid.voxel_size();
    for (int i = 0; i < 3; ++i) {
      box.min[i] = int(std::ceil(config.bounding_box->min[i] / s - 0.5));
      box.max[i] = int(std::ceil(config.bounding_box->max[i] / s - 0.5)) - 1;
    }
    box.min = box.min.cwiseMax(grid.bounds().min);
    box.max = box.max.cwiseMin(grid.bounds().max);
  }
  return box;
}

std::vector<Vec3i> detect_frontiers(const SemanticOccupancyGrid& grid, const GridBounds& box) {
  const std::array<Vec3i, 6> steps = {Vec3i{1, 0, 0},  Vec3i{-1, 0, 0}, Vec3i{0, 1, 0},
                                      Vec3i{0, -1, 0}, Vec3i{0, 0, 1},  Vec3i{0, 0, -1}};
  std::vector<Vec3i> out;
  for (int x = box.min.x(); x <= box.max.x(); ++x)
    for (int y = box.min.y(); y <= box.max.y(); ++y)
      for (int z = box.min.z(); z <= box.max.z(); ++z) {
        const Vec3i v(x, y, z);
        if (grid.state(v) != CellState::Free) continue;
        for (const Vec3i& d : steps) {
          const Vec3i n = v + d;
          if (box.contains(n) && grid.state(n) == CellState::Unknown) {
            out.push_back(v);
            break;
          }
        }
      }
  return out;
}

std::optional<FrontierTarget> nearest_frontier(const SemanticOccupancyGrid& grid,
                                               const Vec3& from, int clearance,
                                               const std::vector<Vec3i>& frontiers,
                                               const std::set<Vec3i, LexLess>& skip) {
  if (frontiers.empty()) return std::nullopt;
  const GridBounds& b = grid.bounds();
  const double s = grid.voxel_size();
  const Vec3i start = voxel_of(from, s);
  if (!b.contains(start)) return std::nullopt;

  const std::int64_t n = b.cell_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::int8_t> fly(n, -1);

  auto flyable = [&](const Vec3i& v) -> bool {
    const std::int64_t lin = b.linear_index(v);
    if (fly[lin] < 0) fly[lin] = is_flyable(grid, v, clearance) ? 1 : 0;
    return fly[lin] == 1;
  };
  // The current cell is usable as a departure point even when arrival scans
  // have since revealed occupancy beside it; the clearance rule applies to
  // the cells flown through, not the one already occupied.
  if (grid.state(start) != CellState::Free) return std::nullopt;

  struct Step {
    Vec3i d;
    double w;
  };
  std::vector<Step> steps;
  steps.reserve(26);
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        steps.push_back({Vec3i(dx, dy, dz), s * std::sqrt(double(dx * dx + dy * dy + dz * dz))});
      }

  const Vec3i ext = b.extent();
  auto decode = [&](std::int64_t lin) {
    const int x = int(lin % ext.x());
    lin /= ext.x();
    const int y = int(lin % ext.y());
    const int z = int(lin / ext.y());
    return Vec3i(b.min.x() + x, b.min.y() + y, b.min.z() + z);
  };

  using Entry = std::pair<double, std::int64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  dist[b.linear_index(start)] = 0.0;
  open.push({0.0, b.linear_index(start)});
  while (!open.empty()) {
    const auto [d, lin] = open.top();
    open.pop();
    if (d > dist[lin]) continue;
    const Vec3i v = decode(lin);
    for (const Step& st : steps) {
      const Vec3i w = v + st.d;
      if (!b.contains(w) || !flyable(w)) continue;
      const std::int64_t wl = b.linear_index(w);
      const double nd = d + st.w;
      if (nd < dist[wl]) {
        dist[wl] = nd;
        parent[wl] = lin;
        open.push({nd, wl});
      }
    }
  }

  std::int64_t best = -1;
  double best_dist = kInf;
  for (const Vec3i& f : frontiers) {
    if (skip.count(f)) continue;
    const std::int64_t lin = b.linear_index(f);
    if (dist[lin] == kInf) continue;
    if (dist[lin] < best_dist || (dist[lin] == best_dist && lin < best)) {
      best = lin;
      best_dist = dist[lin];
    }
  }
  if (best < 0) return std::nullopt;

  FrontierTarget target;
  target.cell = decode(best);
  target.distance = best_dist;
  std::vector<Vec3> rev;
  for (std::int64_t lin = best; lin >= 0; lin = parent[lin])
    rev.push_back(voxel_center(decode(lin), s));
  target.path.waypoints.assign(rev.rbegin(), rev.rend());
  target.path.length = best_dist;
  return target;
}

bool frontier_hop(MissionState& state, const WorldModel& world, const ScenarioConfig& config,
                  const GridBounds& box, const std::string& phase, bool opportunistic,
                  std::set<Vec3i, LexLess>& dormant) {
  const std::vector<Vec3i> frontiers = detect_frontiers(state.grid, box);
  const auto target = nearest_frontier(state.grid, state.pose.position,
                                       config.clearance_voxels, frontiers, dormant);
  if (!target) return false;

  const std::uint64_t before = state.grid.mutation_counter();
  fly_segment(state, target->path, world, config, phase, opportunistic);
  scan_and_log(state, world, config, phase);
  if (opportunistic && credit_from_cell(state, config) > 0) log_timeline(state, "inspect");

  // A visit that taught nothing parks this frontier until the map moves again
  // somewhere; the blind cones above and below the sensor make such cells
  // common.
  if (state.grid.mutation_counter() == before)
    dormant.insert(target->cell);
  else
    dormant.clear();
  return true;
}

MissionLog run_frontier_mission(const WorldModel& world, const ScenarioConfig& config,
                                SemanticOccupancyGrid* final_grid) {
  if (config.voxel_size != world.voxel_size())
    throw ValidationError("world and config disagree on voxel size");
  MissionState state(world.voxel_size(), world.bounds(), config.rng_seed);
  state.pose = config.start_pose;
  const Vec3i start = voxel_of(state.pose.position, world.voxel_size());
  if (!world.bounds().contains(start) || !world.is_empty(start))
    throw ValidationError("start pose must sit in an empty world cell");
  state.log.inspectable_count =
      static_cast<std::int64_t>(inspectable_set(world, config.view).size());

  state.grid.observe_free(start);
  state.log.trajectory.push_back(state.pose.position);
  scan_and_log(state, world, config, "explore");
  if (credit_from_cell(state, config) > 0) log_timeline(state, "inspect");

  const GridBounds box = exploration_box(state.grid, config);
  std::set<Vec3i, LexLess> dormant;
  while (frontier_hop(state, world, config, box, "explore", true, dormant)) {
  }

  finalize_mission_log(state);
  if (final_grid) *final_grid = state.grid;
  return state.log;
}

}  // namespace gatsbi
