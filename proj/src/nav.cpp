#include "gatsbi/nav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace gatsbi {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrt3 = 1.73205080756887729353;

struct Neighbor {
  Vec3i step;
  double cost;  // in voxel units
};

const std::vector<Neighbor>& neighbors26() {
  static const std::vector<Neighbor> offsets = [] {
    std::vector<Neighbor> out;
    for (int x = -1; x <= 1; ++x)
      for (int y = -1; y <= 1; ++y)
        for (int z = -1; z <= 1; ++z) {
          if (x == 0 && y == 0 && z == 0) continue;
          const int manhattan = std::abs(x) + std::abs(y) + std::abs(z);
          out.push_back({{x, y, z}, manhattan == 1 ? 1.0 : (manhattan == 2 ? kSqrt2 : kSqrt3)});
        }
    return out;
  }();
  return offsets;
}

// Admissible and consistent on a 26-connected grid.
double heuristic(const Vec3i& a, const Vec3i& b) {
  std::array<double, 3> d = {double(std::abs(a.x() - b.x())), double(std::abs(a.y() - b.y())),
                             double(std::abs(a.z() - b.z()))};
  std::sort(d.begin(), d.end(), std::greater<>());
  return (d[0] - d[1]) + (d[1] - d[2]) * kSqrt2 + d[2] * kSqrt3;
}

struct OpenEntry {
  double f;
  std::int64_t lin;
  Vec3i v;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    return a.lin > b.lin;  // deterministic tie-break
  }
};

class FlyableMemo {
 public:
  FlyableMemo(const SemanticOccupancyGrid& grid, int clearance)
      : grid_(grid), clearance_(clearance), memo_(std::size_t(grid.bounds().cell_count()), -1) {}

  bool operator()(const Vec3i& v) {
    if (!grid_.bounds().contains(v)) return false;
    std::int8_t& m = memo_[std::size_t(grid_.bounds().linear_index(v))];
    if (m < 0) m = compute(v) ? 1 : 0;
    return m == 1;
  }

 private:
  bool compute(const Vec3i& v) const {
    if (grid_.state(v) != CellState::Free) return false;
    for (int x = -clearance_; x <= clearance_; ++x)
      for (int y = -clearance_; y <= clearance_; ++y)
        for (int z = -clearance_; z <= clearance_; ++z) {
          if (is_occupied(grid_.state(v + Vec3i(x, y, z)))) return false;
        }
    return true;
  }

  const SemanticOccupancyGrid& grid_;
  int clearance_;
  mutable std::vector<std::int8_t> memo_;
};

}  // namespace

bool is_flyable(const SemanticOccupancyGrid& grid, const Vec3i& v, int clearance) {
  FlyableMemo memo(grid, clearance);
  return memo(v);
}

PlanResult plan_path(const SemanticOccupancyGrid& grid, const Vec3& from, const Vec3& to,
                     int clearance) {
  const double s = grid.voxel_size();
  const GridBounds& bounds = grid.bounds();
  const Vec3i from_v = voxel_of(from, s);
  const Vec3i to_v = voxel_of(to, s);

  FlyableMemo flyable(grid, clearance);
  // The source only has to be a known-free cell: the vehicle already sits
  // there, and a scan taken on arrival may have revealed occupancy right next
  // to it. It must always be allowed to leave; only onward cells and the
  // destination are held to the clearance rule.
  if (!bounds.contains(from_v) || !bounds.contains(to_v) ||
      grid.state(from_v) != CellState::Free || !flyable(to_v))
    return {PlanStatus::EndpointBlocked, {}};

  if (from_v == to_v) {
    GridPath path;
    path.waypoints = {voxel_center(from_v, s)};
    path.length = 0.0;
    return {PlanStatus::Ok, std::move(path)};
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n_cells = std::size_t(bounds.cell_count());
  std::vector<double> g(n_cells, kInf);
  std::vector<std::int64_t> parent(n_cells, -1);
  std::vector<std::uint8_t> closed(n_cells, 0);

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  const std::int64_t start_lin = bounds.linear_index(from_v);
  const std::int64_t goal_lin = bounds.linear_index(to_v);
  g[std::size_t(start_lin)] = 0.0;
  open.push({heuristic(from_v, to_v) * s, start_lin, from_v});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[std::size_t(top.lin)]) continue;
    closed[std::size_t(top.lin)] = 1;
    if (top.lin == goal_lin) break;

    const double g_here = g[std::size_t(top.lin)];
    for (const Neighbor& nb : neighbors26()) {
      const Vec3i next = top.v + nb.step;
      if (!bounds.contains(next) || !flyable(next)) continue;
      const std::size_t next_lin = std::size_t(bounds.linear_index(next));
      if (closed[next_lin]) continue;
      const double ng = g_here + nb.cost * s;
      if (ng < g[next_lin]) {
        g[next_lin] = ng;
        parent[next_lin] = top.lin;
        open.push({ng + heuristic(next, to_v) * s, std::int64_t(next_lin), next});
      }
    }
  }

  if (!closed[std::size_t(goal_lin)]) return {PlanStatus::Unreachable, {}};

  GridPath path;
  path.length = g[std::size_t(goal_lin)];
  std::vector<Vec3i> rev;
  const Vec3i e = bounds.extent();
  for (std::int64_t lin = goal_lin; lin >= 0; lin = parent[std::size_t(lin)]) {
    const int x = int(lin % e.x());
    const int y = int((lin / e.x()) % e.y());
    const int z = int(lin / (std::int64_t(e.x()) * e.y()));
    rev.push_back(bounds.min + Vec3i(x, y, z));
  }
  path.waypoints.reserve(rev.size());
  for (auto it = rev.rbegin(); it != rev.rend(); ++it)
    path.waypoints.push_back(voxel_center(*it, s));
  return {PlanStatus::Ok, std::move(path)};
}

PlanResult path_distance(const SemanticOccupancyGrid& grid, const Vec3& from, const Vec3& to,
                         int clearance) {
  return plan_path(grid, from, to, clearance);
}

}  // namespace gatsbi
