#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gatsbi/types.hpp"
#include "gatsbi/view.hpp"

namespace gatsbi {

struct GtspVertex {
  Vec3 position{Vec3::Zero()};
  int cluster = 0;
  std::optional<Candidate> candidate;  // empty for the START vertex
};

// Generalized TSP instance: visit exactly one vertex per cluster, starting at
// the fixed START vertex (vertex 0, cluster 0), open path (no closing edge).
// Costs are Euclidean unless a pairwise override is installed.
class GtspInstance {
 public:
  std::vector<GtspVertex> vertices;
  std::vector<std::vector<int>> clusters;

  double cost(int u, int v) const {
    if (u == v) return 0.0;
    if (!overrides_.empty()) {
      const auto it = overrides_.find(pack(u, v));
      if (it != overrides_.end()) return it->second;
    }
    return (vertices[u].position - vertices[v].position).norm();
  }

  void set_cost_override(int u, int v, double cost) { overrides_[pack(u, v)] = cost; }
  std::size_t override_count() const { return overrides_.size(); }

 private:
  static std::uint64_t pack(int u, int v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
  }
  std::unordered_map<std::uint64_t, double> overrides_;
};

struct Tour {
  std::vector<int> vertex_order;  // starts with vertex 0 (START)
  double total_cost = 0.0;
};

struct SolveBudget {
  int max_iterations = 2000;
  int stagnation_limit = 400;
};

// One cluster per distinct bridge voxel (in lexicographic bridge-voxel order)
// plus the singleton START cluster at the given position. Vertex numbering is
// deterministic: 0 is START, then candidates in their input order.
GtspInstance build_instance(const std::vector<Candidate>& candidates, const Vec3& start);

// Adaptive large-neighborhood solver: cheapest-insertion construction, then
// seeded removal/reinsertion rounds mixed with 2-opt over the cluster order
// and exact per-cluster vertex re-optimization. Deterministic for a fixed
// (instance, budget, seed); never returns worse than the construction.
Tour solve(const GtspInstance& instance, const SolveBudget& budget = {}, std::uint64_t seed = 0);

// Exhaustive optimum over cluster orders and vertex choices. Ties resolve to
// the lexicographically smallest vertex sequence. Throws ValidationError when
// #orders x #vertex choices exceeds 1e7 ("instance too large").
Tour brute_force(const GtspInstance& instance);

// GTSPLIB-flavored plain text round trip (coordinates plus cluster lists;
// overrides are not serialized).
void write_gtsplib(const GtspInstance& instance, std::ostream& os,
                   const std::string& name = "instance");
GtspInstance read_gtsplib(std::istream& is);

}  // namespace gatsbi
