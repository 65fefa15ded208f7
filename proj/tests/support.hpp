#pragma once

// Shared helpers for the test suite. Everything here is deliberately written
// from first principles (slab clipping, exhaustive enumeration, textbook
// Dijkstra) so it can serve as an independent cross-check of the library's
// optimized implementations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "gatsbi/mapping.hpp"
#include "gatsbi/nav.hpp"
#include "gatsbi/types.hpp"
#include "gatsbi/view.hpp"
#include "gatsbi/world.hpp"

namespace testsupport {

using gatsbi::CellState;
using gatsbi::Face;
using gatsbi::GridBounds;
using gatsbi::SemanticOccupancyGrid;
using gatsbi::Vec3;
using gatsbi::Vec3i;
using gatsbi::ViewSpec;
using gatsbi::WorldModel;

struct ChordHit {
  Vec3i voxel{Vec3i::Zero()};
  double t_in = 0.0;
  double t_out = 0.0;
};

// Voxels crossed by the segment a -> b with a chord longer than the graze
// threshold, in travel order. Implemented by clipping the segment against
// every candidate voxel's box (slab method) — no stepping logic shared with
// the library.
inline std::vector<ChordHit> chord_voxels(const Vec3& a, const Vec3& b, double s) {
  const Vec3 d = b - a;
  const double len = d.norm();
  std::vector<ChordHit> out;
  if (!(len > 0.0)) return out;
  const double eps = 1e-9 * s;

  Vec3i lo = gatsbi::voxel_of(a.cwiseMin(b), s) - Vec3i::Ones();
  Vec3i hi = gatsbi::voxel_of(a.cwiseMax(b), s) + Vec3i::Ones();
  for (int x = lo.x(); x <= hi.x(); ++x)
    for (int y = lo.y(); y <= hi.y(); ++y)
      for (int z = lo.z(); z <= hi.z(); ++z) {
        const Vec3i v(x, y, z);
        double t0 = 0.0, t1 = 1.0;
        bool miss = false;
        for (int i = 0; i < 3 && !miss; ++i) {
          const double bmin = v[i] * s;
          const double bmax = (v[i] + 1) * s;
          if (std::abs(d[i]) < 1e-15) {
            if (a[i] < bmin || a[i] >= bmax) miss = true;
            continue;
          }
          double ta = (bmin - a[i]) / d[i];
          double tb = (bmax - a[i]) / d[i];
          if (ta > tb) std::swap(ta, tb);
          t0 = std::max(t0, ta);
          t1 = std::min(t1, tb);
          if (t0 >= t1) miss = true;
        }
        if (miss) continue;
        if ((t1 - t0) * len <= eps) continue;
        out.push_back({v, t0 * len, t1 * len});
      }
  std::sort(out.begin(), out.end(),
            [](const ChordHit& p, const ChordHit& q) { return p.t_in < q.t_in; });
  return out;
}

// First ground-truth occupied voxel along origin + dir * [0, range], by the
// same slab method. Returns the voxel and the entry arc length.
inline std::optional<ChordHit> first_truth_hit(const WorldModel& world, const Vec3& origin,
                                               const Vec3& dir, double range) {
  for (const ChordHit& h : chord_voxels(origin, origin + dir * range, world.voxel_size())) {
    if (!world.bounds().contains(h.voxel)) continue;
    if (world.label(h.voxel)) return h;
  }
  return std::nullopt;
}

using Triple = std::tuple<Vec3i, Face, Vec3i>;  // bridge voxel, face, viewpoint

struct TripleLess {
  bool operator()(const Triple& a, const Triple& b) const {
    const gatsbi::LexLess lex;
    if (lex(std::get<0>(a), std::get<0>(b))) return true;
    if (lex(std::get<0>(b), std::get<0>(a))) return false;
    if (std::get<1>(a) != std::get<1>(b))
      return static_cast<int>(std::get<1>(a)) < static_cast<int>(std::get<1>(b));
    return lex(std::get<2>(a), std::get<2>(b));
  }
};

// Exhaustive enumeration of every viewable (bridge voxel, face, free voxel)
// triple over the whole grid: no bounding boxes, no angular prefilters, no
// candidate ordering tricks. The reference for set-equality checks.
inline std::set<Triple, TripleLess> oracle_triples(const SemanticOccupancyGrid& grid,
                                                   const ViewSpec& spec) {
  std::set<Triple, TripleLess> out;
  const GridBounds& b = grid.bounds();
  const double s = grid.voxel_size();
  const double half =
      std::min(gatsbi::deg2rad(spec.apex_deg) / 2.0 + gatsbi::deg2rad(spec.angle_tol_deg),
               gatsbi::kPi);
  const double cos_half = std::cos(half);

  std::vector<Vec3i> bridge, free_cells;
  for (int x = b.min.x(); x <= b.max.x(); ++x)
    for (int y = b.min.y(); y <= b.max.y(); ++y)
      for (int z = b.min.z(); z <= b.max.z(); ++z) {
        const Vec3i v(x, y, z);
        if (grid.state(v) == CellState::BridgeNotInspected) bridge.push_back(v);
        if (grid.state(v) == CellState::Free) free_cells.push_back(v);
      }

  for (const Vec3i& bn : bridge)
    for (Face face : gatsbi::kAllFaces) {
      if (gatsbi::is_occupied(grid.state(bn + gatsbi::face_step(face)))) continue;
      const Vec3 fc = gatsbi::face_center(bn, face, s);
      const Vec3 normal = gatsbi::face_normal(face);
      for (const Vec3i& v : free_cells) {
        const Vec3 vc = gatsbi::voxel_center(v, s);
        const Vec3 ray = vc - fc;
        const double d = ray.norm();
        if (d < spec.d_min || d > spec.d_max) continue;
        if (ray.dot(normal) < cos_half * d) continue;
        bool blocked = false;
        for (const ChordHit& h : chord_voxels(vc, fc, s)) {
          if (h.voxel == bn) continue;
          if (grid.state(h.voxel) != CellState::Free) {
            blocked = true;
            break;
          }
        }
        if (!blocked) out.insert({bn, face, v});
      }
    }
  return out;
}

// Plain Dijkstra over the 26-connected flyable subgrid; the source cell is
// exempt from the clearance rule exactly like the library's planner. Returns
// the shortest path length to `to`, or nothing.
inline std::optional<double> dijkstra_length(const SemanticOccupancyGrid& grid, const Vec3i& from,
                                             const Vec3i& to, int clearance) {
  const GridBounds& b = grid.bounds();
  if (!b.contains(from) || !b.contains(to)) return std::nullopt;
  if (grid.state(from) != CellState::Free) return std::nullopt;
  if (!gatsbi::is_flyable(grid, to, clearance)) return std::nullopt;
  if (from == to) return 0.0;

  const double s = grid.voxel_size();
  std::map<std::int64_t, double> dist;
  using Entry = std::pair<double, std::int64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  dist[b.linear_index(from)] = 0.0;
  open.push({0.0, b.linear_index(from)});
  const std::int64_t goal = b.linear_index(to);

  const Vec3i e = b.extent();
  auto decode = [&](std::int64_t lin) {
    const int x = int(lin % e.x());
    const int y = int((lin / e.x()) % e.y());
    const int z = int(lin / (std::int64_t(e.x()) * e.y()));
    return Vec3i(b.min.x() + x, b.min.y() + y, b.min.z() + z);
  };

  while (!open.empty()) {
    const auto [d, lin] = open.top();
    open.pop();
    if (d > dist[lin]) continue;
    if (lin == goal) return d;
    const Vec3i v = decode(lin);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const Vec3i w = v + Vec3i(dx, dy, dz);
          if (!b.contains(w) || !gatsbi::is_flyable(grid, w, clearance)) continue;
          const double nd = d + s * std::sqrt(double(dx * dx + dy * dy + dz * dz));
          const std::int64_t wl = b.linear_index(w);
          auto it = dist.find(wl);
          if (it == dist.end() || nd < it->second) {
            dist[wl] = nd;
            open.push({nd, wl});
          }
        }
  }
  return std::nullopt;
}

// A small random world: scattered bridge and obstacle boxes over a ground
// patch, plus the grid bounds to run it in.
inline WorldModel random_world(std::mt19937_64& rng, int span = 8) {
  std::uniform_int_distribution<int> coord(0, span - 2);
  std::uniform_int_distribution<int> size(1, 2);
  std::uniform_int_distribution<int> nshapes(1, 4);
  std::uniform_int_distribution<int> kind(0, 2);

  std::vector<gatsbi::BoxShape> shapes;
  const int n = nshapes(rng);
  for (int i = 0; i < n; ++i) {
    const Vec3 lo(coord(rng), coord(rng), coord(rng));
    const Vec3 sz(size(rng), size(rng), size(rng));
    shapes.push_back({lo, lo + sz,
                      kind(rng) == 0 ? gatsbi::GroundTruthLabel::Obstacle
                                     : gatsbi::GroundTruthLabel::Bridge});
  }
  GridBounds bounds{Vec3i::Constant(-4), Vec3i::Constant(span + 4)};
  return gatsbi::world_from_primitives(shapes, 1.0, 2, bounds);
}

}  // namespace testsupport
