#include "gatsbi/executor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "gatsbi/baseline.hpp"
#include "gatsbi/view.hpp"

namespace gatsbi {

namespace {

using WallClock = std::chrono::steady_clock;

double wall_since(const WallClock::time_point& t0) {
  return std::chrono::duration<double>(WallClock::now() - t0).count();
}

}  // namespace

void log_timeline(MissionState& state, const std::string& phase) {
  TimelineRow row;
  row.clock_s = state.clock_s;
  row.distance_m = state.distance_m;
  row.v_f = state.grid.n_free();
  row.v_o = state.grid.n_obstacle();
  row.v_bn = state.grid.n_bridge_not_inspected();
  row.v_bi = state.grid.n_bridge_inspected();
  row.pct_inspected = state.log.inspectable_count > 0
                          ? 100.0 * double(row.v_bi) / double(state.log.inspectable_count)
                          : 100.0;
  row.phase = phase;
  state.log.timeline.push_back(std::move(row));
}

void finalize_mission_log(MissionState& state) {
  const auto& bn = state.grid.bridge_not_inspected_cells();
  state.log.uninspectable_remainder.assign(bn.begin(), bn.end());
  state.log.total_distance_m = state.distance_m;
  state.log.total_time_s = state.clock_s;
  state.log.final_percent =
      state.log.inspectable_count > 0
          ? 100.0 * double(state.grid.n_bridge_inspected()) /
                double(state.log.inspectable_count)
          : 100.0;
  log_timeline(state, "end");
}

void MissionLog::write_timeline_csv(std::ostream& os) const {
  os << "clock_s,distance_m,v_free,v_obstacle,v_bridge_ni,v_bridge_i,pct_inspected,phase\n";
  char buf[192];
  for (const TimelineRow& r : timeline) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%lld,%lld,%lld,%lld,%.6f,", r.clock_s,
                  r.distance_m, static_cast<long long>(r.v_f), static_cast<long long>(r.v_o),
                  static_cast<long long>(r.v_bn), static_cast<long long>(r.v_bi),
                  r.pct_inspected);
    os << buf << r.phase << '\n';
  }
}

void MissionLog::write_timing_csv(std::ostream& os) const {
  os << "replan_idx,non_gtsp_s,gtsp_s,flight_s\n";
  char buf[128];
  for (const TimingRow& r : timing) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.3f\n", r.replan_idx, r.non_gtsp_s, r.gtsp_s,
                  r.flight_s);
    os << buf;
  }
}

IntegrationReport scan_and_log(MissionState& state, const WorldModel& world,
                               const ScenarioConfig& config, const std::string& phase) {
  std::mt19937_64* rng = config.lidar.label_noise > 0.0 ? &state.rng : nullptr;
  const LabeledScan scan = simulate_scan(world, state.pose, config.lidar, rng);
  const IntegrationReport report = integrate_scan(state.grid, scan);
  state.next_scan_clock = std::max(state.next_scan_clock, state.clock_s + config.scan_period);
  log_timeline(state, phase);
  return report;
}

int credit_from_cell(MissionState& state, const ScenarioConfig& config) {
  const double s = state.grid.voxel_size();
  const Vec3i cell = voxel_of(state.pose.position, s);
  if (state.grid.state(cell) != CellState::Free) return 0;

  const Vec3 cc = voxel_center(cell, s);
  const double reach = config.view.d_max + 0.5 * s * std::sqrt(3.0);
  const double reach2 = reach * reach;

  // Marking mutates the not-inspected set, so pick targets from a copy.
  const auto& live = state.grid.bridge_not_inspected_cells();
  std::vector<Vec3i> targets(live.begin(), live.end());

  int marks = 0;
  for (const Vec3i& b : targets) {
    if ((voxel_center(b, s) - cc).squaredNorm() > reach2) continue;
    for (Face face : kAllFaces) {
      if (!is_viewable(state.grid, cell, b, face, config.view)) continue;
      state.grid.mark_inspected(b);
      state.log.inspections.push_back(b);
      ++marks;
      break;
    }
  }
  return marks;
}

void fly_segment(MissionState& state, const GridPath& path, const WorldModel& world,
                 const ScenarioConfig& config, const std::string& phase, bool opportunistic) {
  if (path.waypoints.empty()) return;
  const double s = state.grid.voxel_size();
  const double nudge = 1e-9 * s;

  if (state.log.trajectory.empty()) state.log.trajectory.push_back(path.waypoints.front());
  state.pose.position = path.waypoints.front();

  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const Vec3 a = path.waypoints[i];
    const Vec3 b = path.waypoints[i + 1];
    const Vec3 leg = b - a;
    const double len = leg.norm();
    if (len <= 0.0) continue;
    const Vec3 dir = leg / len;
    state.pose.yaw = std::atan2(dir.y(), dir.x());

    const double leg_start_clock = state.clock_s;
    const double leg_start_dist = state.distance_m;
    const double leg_end_clock = leg_start_clock + len / config.flight_speed;

    // Scheduled scans falling inside this leg. The scan point retreats a hair
    // toward the leg start so a sample landing exactly on a voxel corner bins
    // into a cell the path actually crosses.
    while (state.next_scan_clock <= leg_end_clock) {
      const double tc = state.next_scan_clock;
      const double off =
          std::clamp((tc - leg_start_clock) * config.flight_speed, 0.0, len);
      state.pose.position = a + dir * std::max(0.0, off - nudge);
      state.clock_s = tc;
      state.distance_m = leg_start_dist + off;
      scan_and_log(state, world, config, phase);
    }

    state.clock_s = leg_end_clock;
    state.distance_m = leg_start_dist + len;
    state.pose.position = b;
    state.log.trajectory.push_back(b);
    if (opportunistic && credit_from_cell(state, config) > 0) log_timeline(state, phase);
  }
}

Mission::Mission(const WorldModel& world, const ScenarioConfig& config)
    : world_(world),
      config_(config),
      state_(world.voxel_size(), world.bounds(), config.rng_seed) {
  if (config_.voxel_size != world.voxel_size())
    throw ValidationError("world and config disagree on voxel size");
  state_.pose = config_.start_pose;
  const Vec3i start = voxel_of(state_.pose.position, world.voxel_size());
  if (!world.bounds().contains(start) || !world.is_empty(start))
    throw ValidationError("start pose must sit in an empty world cell");
  state_.log.inspectable_count =
      static_cast<std::int64_t>(inspectable_set(world, config_.view).size());
}

void Mission::bootstrap() {
  // The vehicle knows its own launch cell is free; rays never carve the cell
  // they start from.
  state_.grid.observe_free(voxel_of(state_.pose.position, state_.grid.voxel_size()));
  state_.log.trajectory.push_back(state_.pose.position);
  scan_and_log(state_, world_, config_, "bootstrap");

  const GridBounds box = exploration_box(state_.grid, config_);
  std::set<Vec3i, LexLess> dormant;
  while (state_.grid.n_bridge_not_inspected() == 0) {
    if (!frontier_hop(state_, world_, config_, box, "bootstrap", config_.opportunistic,
                      dormant))
      throw MissionError("bridge not observable");
  }
}

std::optional<Tour> Mission::plan_iteration() {
  const auto t0 = WallClock::now();
  session_candidates_ = generate_viewpoints(state_.grid, config_.view);
  // Discard viewpoints the vehicle could never occupy before deciding whether
  // this round has work: a target whose every viewpoint is unflyable must not
  // look plannable, or the mission would spin on empty tours instead of
  // exploring. Occupied knowledge only grows, so the test never un-fails.
  std::erase_if(session_candidates_, [&](const Candidate& c) {
    return !is_flyable(state_.grid, c.free_voxel, config_.clearance_voxels);
  });
  const double gen_s = wall_since(t0);
  if (session_candidates_.empty()) {
    push_timing_row(gen_s, 0.0);
    return std::nullopt;
  }
  return resolve_from_pose(SolveBudget{}, gen_s);
}

Tour Mission::resolve_from_pose(const SolveBudget& budget, double extra_non_gtsp_s) {
  const auto t0 = WallClock::now();
  rebuild_instance();
  const double prep_s = wall_since(t0);

  const auto t1 = WallClock::now();
  Tour tour = solve(instance_, budget, config_.rng_seed + std::uint64_t(replan_counter_));
  const double gtsp_s = wall_since(t1);

  push_timing_row(extra_non_gtsp_s + prep_s, gtsp_s);
  record_tour(tour);
  return tour;
}

void Mission::rebuild_instance() {
  // Targets inspected since generation fall out; so do viewpoints whose cell
  // the vehicle can no longer occupy. Occupied knowledge only grows, so a
  // cell that fails the clearance test now fails it forever.
  std::erase_if(session_candidates_, [&](const Candidate& c) {
    return state_.grid.state(c.bridge_voxel) != CellState::BridgeNotInspected ||
           !is_flyable(state_.grid, c.free_voxel, config_.clearance_voxels);
  });
  instance_ = build_instance(session_candidates_, state_.pose.position);
  apply_override_cache();
}

void Mission::record_tour(const Tour& tour) {
  std::vector<TourStep> steps;
  steps.reserve(tour.vertex_order.size());
  for (int v : tour.vertex_order) {
    const GtspVertex& vx = instance_.vertices[v];
    TourStep step;
    if (vx.candidate) {
      step.free_voxel = vx.candidate->free_voxel;
      step.bridge_voxel = vx.candidate->bridge_voxel;
      step.face = vx.candidate->face;
    } else {
      step.is_start = true;
    }
    steps.push_back(step);
  }
  state_.log.tours.push_back(std::move(steps));
}

void Mission::push_timing_row(double non_gtsp_s, double gtsp_s) {
  TimingRow row;
  row.replan_idx = replan_counter_++;
  row.non_gtsp_s = non_gtsp_s;
  row.gtsp_s = gtsp_s;
  row.flight_s = state_.clock_s - clock_at_last_timing_row_;
  clock_at_last_timing_row_ = state_.clock_s;
  state_.log.timing.push_back(row);
}

void Mission::apply_override_cache() {
  if (edge_cost_cache_.empty()) return;
  const double s = state_.grid.voxel_size();
  std::map<std::int64_t, std::vector<int>> by_cell;
  for (int i = 0; i < static_cast<int>(instance_.vertices.size()); ++i) {
    const Vec3i v = voxel_of(instance_.vertices[i].position, s);
    by_cell[state_.grid.bounds().linear_index(v)].push_back(i);
  }
  for (const auto& [key, cost] : edge_cost_cache_) {
    const auto a = by_cell.find(key.first);
    const auto b = by_cell.find(key.second);
    if (a == by_cell.end() || b == by_cell.end()) continue;
    for (int i : a->second)
      for (int j : b->second)
        if (i != j) instance_.set_cost_override(i, j, cost);
  }
}

void Mission::cache_edge_cost(const Vec3& a, const Vec3& b, double cost) {
  const double s = state_.grid.voxel_size();
  std::int64_t la = state_.grid.bounds().linear_index(voxel_of(a, s));
  std::int64_t lb = state_.grid.bounds().linear_index(voxel_of(b, s));
  if (la == lb) return;
  if (la > lb) std::swap(la, lb);
  auto [it, inserted] = edge_cost_cache_.try_emplace(std::make_pair(la, lb), cost);
  if (inserted) {
    ++cache_writes_;
  } else if (it->second != cost) {
    it->second = cost;
    ++cache_writes_;
  }
}

LazyCheckResult Mission::lazy_edge_check(const Tour& tour, int position) {
  LazyCheckResult result;
  const int u = tour.vertex_order[position];
  const int v = tour.vertex_order[position + 1];
  result.vertex = v;

  const PlanResult plan = plan_path(state_.grid, state_.pose.position,
                                    instance_.vertices[v].position, config_.clearance_voxels);
  if (plan.status != PlanStatus::Ok) {
    result.decision = EdgeDecision::DropVertex;
    return result;
  }

  const double expected = instance_.cost(u, v);
  if (plan.path.length > expected + config_.dd) {
    cache_edge_cost(instance_.vertices[u].position, instance_.vertices[v].position,
                    plan.path.length);
    instance_.set_cost_override(u, v, plan.path.length);
    result.decision = EdgeDecision::Replan;
    return result;
  }

  result.decision = EdgeDecision::Proceed;
  result.path = plan.path;
  return result;
}

TourOutcome Mission::run_tour(Tour tour) {
  const double tour_start_clock = state_.clock_s;
  const SolveBudget mid_budget{600, 150};
  int retries = 24;
  int position = 0;

  while (position + 1 < static_cast<int>(tour.vertex_order.size())) {
    const LazyCheckResult check = lazy_edge_check(tour, position);

    if (check.decision != EdgeDecision::Proceed) {
      if (check.decision == EdgeDecision::DropVertex) {
        const GtspVertex& vx = instance_.vertices[check.vertex];
        if (vx.candidate) {
          const Candidate dropped = *vx.candidate;
          std::erase_if(session_candidates_, [&](const Candidate& c) {
            return c.free_voxel == dropped.free_voxel &&
                   c.bridge_voxel == dropped.bridge_voxel && c.face == dropped.face;
          });
        }
      }
      if (--retries < 0) return TourOutcome::Invalidated;
      tour = resolve_from_pose(mid_budget);
      position = 0;
      if (tour.vertex_order.size() <= 1) return TourOutcome::Completed;
      continue;
    }

    const int next = tour.vertex_order[position + 1];
    const double euclid = (instance_.vertices[next].position - state_.pose.position).norm();
    state_.log.edge_audits.push_back(
        {instance_.cost(tour.vertex_order[position], next), check.path.length, euclid,
         config_.dd});
    fly_segment(state_, check.path, world_, config_, "tour", config_.opportunistic);

    const GtspVertex& vx = instance_.vertices[next];
    if (vx.candidate) state_.pose = vx.candidate->viewpoint_pose;
    scan_and_log(state_, world_, config_, "tour");

    if (vx.candidate) {
      // Re-validate against the map as it stands on arrival; the world seen
      // en route may have blocked the face or inspected it already.
      const Candidate& c = *vx.candidate;
      if (state_.grid.state(c.bridge_voxel) == CellState::BridgeNotInspected &&
          is_viewable(state_.grid, c.free_voxel, c.bridge_voxel, c.face, config_.view)) {
        state_.grid.mark_inspected(c.bridge_voxel);
        state_.log.inspections.push_back(c.bridge_voxel);
        log_timeline(state_, "inspect");
      }
      if (config_.opportunistic && credit_from_cell(state_, config_) > 0)
        log_timeline(state_, "inspect");
    }

    ++position;
    if (state_.clock_s - tour_start_clock >= config_.rpt) return TourOutcome::TimedOut;
  }
  return TourOutcome::Completed;
}

MissionLog Mission::run() {
  bootstrap();

  const GridBounds box = exploration_box(state_.grid, config_);
  std::set<Vec3i, LexLess> dormant;
  int stagnant = 0;

  while (state_.grid.n_bridge_not_inspected() > 0) {
    const std::uint64_t mutations_before = state_.grid.mutation_counter();
    const std::uint64_t cache_before = cache_writes_;

    std::optional<Tour> tour = plan_iteration();
    if (tour) {
      run_tour(std::move(*tour));
    } else {
      // Nothing viewable yet. Push the exploration frontier once; if that is
      // exhausted too, the stagnation counter ends the mission.
      frontier_hop(state_, world_, config_, box, "recover", config_.opportunistic, dormant);
    }

    const bool progress = state_.grid.mutation_counter() != mutations_before ||
                          cache_writes_ != cache_before;
    stagnant = progress ? 0 : stagnant + 1;
    if (stagnant >= 2) break;
  }

  finalize_mission_log(state_);
  return state_.log;
}

MissionLog run_mission(const WorldModel& world, const ScenarioConfig& config) {
  Mission mission(world, config);
  return mission.run();
}

}  // namespace gatsbi
