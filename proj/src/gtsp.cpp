#include "gatsbi/gtsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace gatsbi {

namespace {

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Uniform index in [0, n) without std::uniform_int_distribution (whose output
// sequence is implementation-defined).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return std::uint64_t((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

int roulette(std::mt19937_64& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double ticket = u01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    ticket -= weights[i];
    if (ticket < 0.0) return int(i);
  }
  return int(weights.size()) - 1;
}

struct Solution {
  std::vector<int> order;   // cluster ids along the path, order[0] == 0
  std::vector<int> choice;  // chosen vertex per cluster id
  double cost = 0.0;
};

double path_cost(const GtspInstance& inst, const Solution& s) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.order.size(); ++i)
    total += inst.cost(s.choice[std::size_t(s.order[i])], s.choice[std::size_t(s.order[i + 1])]);
  return total;
}

// Cost of inserting vertex v at position p of the open path.
double insertion_delta(const GtspInstance& inst, const Solution& s, int v, std::size_t p) {
  const int before = s.choice[std::size_t(s.order[p - 1])];
  if (p == s.order.size()) return inst.cost(before, v);
  const int after = s.choice[std::size_t(s.order[p])];
  return inst.cost(before, v) + inst.cost(v, after) - inst.cost(before, after);
}

// Cheapest insertion over (cluster, vertex, position), ties toward the lower
// cluster id, then position, then vertex id.
void greedy_insert(const GtspInstance& inst, Solution& s, std::vector<int> pending) {
  std::sort(pending.begin(), pending.end());
  while (!pending.empty()) {
    double best_delta = std::numeric_limits<double>::infinity();
    std::size_t best_cluster_pos = 0;
    std::size_t best_insert_at = 1;
    int best_vertex = -1;
    for (std::size_t ci = 0; ci < pending.size(); ++ci) {
      for (std::size_t p = 1; p <= s.order.size(); ++p) {
        for (int v : inst.clusters[std::size_t(pending[ci])]) {
          const double delta = insertion_delta(inst, s, v, p);
          if (delta < best_delta) {
            best_delta = delta;
            best_cluster_pos = ci;
            best_insert_at = p;
            best_vertex = v;
          }
        }
      }
    }
    const int cluster = pending[best_cluster_pos];
    s.order.insert(s.order.begin() + std::ptrdiff_t(best_insert_at), cluster);
    s.choice[std::size_t(cluster)] = best_vertex;
    s.cost += best_delta;
    pending.erase(pending.begin() + std::ptrdiff_t(best_cluster_pos));
  }
}

Solution construct(const GtspInstance& inst) {
  Solution s;
  s.order = {0};
  s.choice.assign(inst.clusters.size(), -1);
  s.choice[0] = inst.clusters[0].front();
  s.cost = 0.0;
  std::vector<int> pending;
  for (std::size_t c = 1; c < inst.clusters.size(); ++c) pending.push_back(int(c));
  greedy_insert(inst, s, std::move(pending));
  return s;
}

// Exact vertex choices for the fixed cluster order: shortest path through the
// cluster layers. Ties take the lower vertex id.
void dp_reopt(const GtspInstance& inst, Solution& s) {
  const std::size_t len = s.order.size();
  if (len < 2) return;
  std::vector<std::vector<double>> dist(len);
  std::vector<std::vector<int>> back(len);
  dist[0] = {0.0};
  for (std::size_t i = 1; i < len; ++i) {
    const auto& prev_cluster = inst.clusters[std::size_t(s.order[i - 1])];
    const auto& here = inst.clusters[std::size_t(s.order[i])];
    dist[i].assign(here.size(), std::numeric_limits<double>::infinity());
    back[i].assign(here.size(), 0);
    for (std::size_t b = 0; b < here.size(); ++b) {
      for (std::size_t a = 0; a < prev_cluster.size(); ++a) {
        const double d = dist[i - 1][a] + inst.cost(prev_cluster[a], here[b]);
        if (d < dist[i][b]) {
          dist[i][b] = d;
          back[i][b] = int(a);
        }
      }
    }
  }
  std::size_t pick = 0;
  for (std::size_t b = 1; b < dist[len - 1].size(); ++b)
    if (dist[len - 1][b] < dist[len - 1][pick]) pick = b;
  const double total = dist[len - 1][pick];
  for (std::size_t i = len - 1; i >= 1; --i) {
    s.choice[std::size_t(s.order[i])] = inst.clusters[std::size_t(s.order[i])][pick];
    pick = std::size_t(back[i][pick]);
  }
  s.cost = total;
}

// First-improvement 2-opt over the cluster order with the vertex choices
// held fixed. Symmetric costs keep the reversed middle segment's cost.
void two_opt(const GtspInstance& inst, Solution& s) {
  const std::size_t len = s.order.size();
  if (len < 4) return;
  const auto vertex_at = [&](std::size_t p) { return s.choice[std::size_t(s.order[p])]; };
  bool improved = true;
  int guard = 0;
  while (improved && ++guard < 200) {
    improved = false;
    for (std::size_t i = 1; i + 1 < len && !improved; ++i) {
      for (std::size_t j = i + 1; j < len && !improved; ++j) {
        const double before = inst.cost(vertex_at(i - 1), vertex_at(i)) +
                              (j + 1 < len ? inst.cost(vertex_at(j), vertex_at(j + 1)) : 0.0);
        const double after = inst.cost(vertex_at(i - 1), vertex_at(j)) +
                             (j + 1 < len ? inst.cost(vertex_at(i), vertex_at(j + 1)) : 0.0);
        if (after < before) {
          std::reverse(s.order.begin() + std::ptrdiff_t(i), s.order.begin() + std::ptrdiff_t(j + 1));
          s.cost += after - before;
          improved = true;
        }
      }
    }
  }
}

void polish(const GtspInstance& inst, Solution& s) {
  dp_reopt(inst, s);
  two_opt(inst, s);
  dp_reopt(inst, s);
}

Tour to_tour(const GtspInstance& inst, const Solution& s) {
  Tour tour;
  tour.vertex_order.reserve(s.order.size());
  for (int c : s.order) tour.vertex_order.push_back(s.choice[std::size_t(c)]);
  tour.total_cost = path_cost(inst, s);
  return tour;
}

}  // namespace

GtspInstance build_instance(const std::vector<Candidate>& candidates, const Vec3& start) {
  GtspInstance inst;
  inst.vertices.push_back({start, 0, std::nullopt});
  inst.clusters.push_back({0});

  std::map<Vec3i, int, LexLess> cluster_of;
  for (const Candidate& c : candidates) cluster_of.emplace(c.bridge_voxel, 0);
  int next_id = 1;
  for (auto& [voxel, id] : cluster_of) id = next_id++;
  inst.clusters.resize(std::size_t(next_id));

  for (const Candidate& c : candidates) {
    const int cluster = cluster_of.at(c.bridge_voxel);
    const int vertex = int(inst.vertices.size());
    inst.vertices.push_back({c.viewpoint_pose.position, cluster, c});
    inst.clusters[std::size_t(cluster)].push_back(vertex);
  }
  return inst;
}

Tour solve(const GtspInstance& instance, const SolveBudget& budget, std::uint64_t seed) {
  if (instance.vertices.empty() || instance.clusters.empty())
    throw ValidationError("instance has no start vertex");

  // Small instances are solved exactly. The enumeration count is the product
  // of the free-cluster sizes times the factorial of the free-cluster count;
  // under the cap below the exact search finishes in well under a millisecond,
  // so the metaheuristic (and its budget and seed) only matter beyond it.
  double combos = 1.0;
  for (std::size_t c = 1; c < instance.clusters.size(); ++c)
    combos *= double(instance.clusters[c].size());
  for (std::size_t c = 2; c < instance.clusters.size(); ++c) combos *= double(c);
  if (combos <= 2e5) return brute_force(instance);

  std::mt19937_64 rng(seed);
  Solution current = construct(instance);
  polish(instance, current);
  Solution best = current;

  const std::size_t len = current.order.size();
  if (len <= 2) return to_tour(instance, best);

  const int k_max = int(std::clamp<std::size_t>((len - 1) / 3, 1, 12));
  std::vector<double> op_weights(3, 1.0);
  std::vector<double> k_weights(std::size_t(k_max), 1.0);

  double temperature = 0.03 * std::max(best.cost, 0.0);
  const double cooling =
      budget.max_iterations > 1 ? std::pow(1e-3, 1.0 / budget.max_iterations) : 1.0;

  int stagnation = 0;
  for (int iter = 0; iter < budget.max_iterations && stagnation < budget.stagnation_limit;
       ++iter, ++stagnation) {
    const int op = roulette(rng, op_weights);
    const int k_pick = roulette(rng, k_weights);
    const int k = std::min(k_pick + 1, int(current.order.size()) - 1);

    Solution cand = current;
    std::vector<int> removed;
    if (op == 0) {
      // Contiguous segment.
      const std::size_t start = 1 + std::size_t(bounded(rng, cand.order.size() - std::size_t(k)));
      removed.assign(cand.order.begin() + std::ptrdiff_t(start),
                     cand.order.begin() + std::ptrdiff_t(start + std::size_t(k)));
      cand.order.erase(cand.order.begin() + std::ptrdiff_t(start),
                       cand.order.begin() + std::ptrdiff_t(start + std::size_t(k)));
    } else if (op == 1) {
      // k distinct random positions.
      std::vector<std::size_t> positions;
      for (std::size_t p = 1; p < cand.order.size(); ++p) positions.push_back(p);
      for (int i = 0; i < k; ++i) {
        const std::size_t j = std::size_t(i) + std::size_t(bounded(rng, positions.size() - std::size_t(i)));
        std::swap(positions[std::size_t(i)], positions[j]);
      }
      positions.resize(std::size_t(k));
      std::sort(positions.rbegin(), positions.rend());
      for (std::size_t p : positions) {
        removed.push_back(cand.order[p]);
        cand.order.erase(cand.order.begin() + std::ptrdiff_t(p));
      }
    } else {
      // Positions whose removal saves the most.
      const auto vertex_at = [&](std::size_t p) { return cand.choice[std::size_t(cand.order[p])]; };
      std::vector<std::pair<double, std::size_t>> gains;
      for (std::size_t p = 1; p < cand.order.size(); ++p) {
        double gain = instance.cost(vertex_at(p - 1), vertex_at(p));
        if (p + 1 < cand.order.size())
          gain += instance.cost(vertex_at(p), vertex_at(p + 1)) -
                  instance.cost(vertex_at(p - 1), vertex_at(p + 1));
        gains.emplace_back(-gain, p);
      }
      std::sort(gains.begin(), gains.end());
      std::vector<std::size_t> positions;
      for (int i = 0; i < k; ++i) positions.push_back(gains[std::size_t(i)].second);
      std::sort(positions.rbegin(), positions.rend());
      for (std::size_t p : positions) {
        removed.push_back(cand.order[p]);
        cand.order.erase(cand.order.begin() + std::ptrdiff_t(p));
      }
    }

    cand.cost = path_cost(instance, cand);
    greedy_insert(instance, cand, removed);

    const double delta = cand.cost - current.cost;
    double reward = 0.0;
    if (cand.cost < best.cost) {
      polish(instance, cand);
      best = cand;
      current = cand;
      stagnation = 0;
      reward = 1.0;
    } else if (delta <= 0.0) {
      current = cand;
      reward = 0.4;
    } else if (temperature > 0.0 && std::exp(-delta / temperature) > u01(rng)) {
      current = cand;
      reward = 0.1;
    }
    op_weights[std::size_t(op)] = std::max(0.1, 0.9 * op_weights[std::size_t(op)] + reward);
    k_weights[std::size_t(k_pick)] = std::max(0.1, 0.9 * k_weights[std::size_t(k_pick)] + reward);
    temperature *= cooling;
  }

  polish(instance, best);
  return to_tour(instance, best);
}

Tour brute_force(const GtspInstance& instance) {
  const std::size_t m = instance.clusters.size();
  if (m == 0) throw ValidationError("instance has no start vertex");

  double combos = 1.0;
  for (std::size_t c = 1; c < m; ++c) combos *= double(instance.clusters[c].size());
  for (std::size_t c = 2; c < m; ++c) combos *= double(c);
  if (combos > 1e7) throw ValidationError("instance too large");

  std::vector<int> perm;
  for (std::size_t c = 1; c < m; ++c) perm.push_back(int(c));

  Tour best;
  best.total_cost = std::numeric_limits<double>::infinity();
  std::vector<int> seq = {instance.clusters[0].front()};

  const auto consider = [&](const std::vector<int>& vertices, double cost) {
    if (cost < best.total_cost ||
        (cost == best.total_cost && vertices < best.vertex_order)) {
      best.vertex_order = vertices;
      best.total_cost = cost;
    }
  };

  const std::function<void(std::size_t, double)> recurse = [&](std::size_t depth, double cost) {
    if (cost > best.total_cost) return;
    if (depth == perm.size()) {
      consider(seq, cost);
      return;
    }
    for (int v : instance.clusters[std::size_t(perm[depth])]) {
      const double step = instance.cost(seq.back(), v);
      seq.push_back(v);
      recurse(depth + 1, cost + step);
      seq.pop_back();
    }
  };

  if (perm.empty()) {
    consider(seq, 0.0);
    return best;
  }
  std::sort(perm.begin(), perm.end());
  do {
    recurse(0, 0.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void write_gtsplib(const GtspInstance& instance, std::ostream& os, const std::string& name) {
  os << "NAME: " << name << "\n";
  os << "TYPE: GTSP\n";
  os << "COMMENT: open path anchored at vertex 1\n";
  os << "DIMENSION: " << instance.vertices.size() << "\n";
  os << "GTSP_SETS: " << instance.clusters.size() << "\n";
  os << "EDGE_WEIGHT_TYPE: EUC_3D\n";
  os << "NODE_COORD_SECTION\n";
  char line[160];
  for (std::size_t i = 0; i < instance.vertices.size(); ++i) {
    const Vec3& p = instance.vertices[i].position;
    std::snprintf(line, sizeof line, "%zu %.6f %.6f %.6f\n", i + 1, p.x(), p.y(), p.z());
    os << line;
  }
  os << "GTSP_SET_SECTION\n";
  for (std::size_t c = 0; c < instance.clusters.size(); ++c) {
    os << (c + 1);
    for (int v : instance.clusters[c]) os << ' ' << (v + 1);
    os << " -1\n";
  }
  os << "EOF\n";
}

GtspInstance read_gtsplib(std::istream& is) {
  GtspInstance inst;
  std::string line;
  std::size_t dimension = 0, sets = 0;
  bool in_coords = false, in_sets = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("NODE_COORD_SECTION", 0) == 0) {
      in_coords = true;
      in_sets = false;
      continue;
    }
    if (line.rfind("GTSP_SET_SECTION", 0) == 0) {
      in_sets = true;
      in_coords = false;
      continue;
    }
    if (line.rfind("EOF", 0) == 0) break;
    if (in_coords) {
      std::istringstream ss(line);
      std::size_t idx;
      double x, y, z;
      if (!(ss >> idx >> x >> y >> z)) throw ParseError("bad node line: " + line);
      if (idx != inst.vertices.size() + 1) throw ParseError("node indices must be consecutive");
      inst.vertices.push_back({Vec3(x, y, z), 0, std::nullopt});
      continue;
    }
    if (in_sets) {
      std::istringstream ss(line);
      std::size_t set_id;
      if (!(ss >> set_id)) throw ParseError("bad set line: " + line);
      if (set_id != inst.clusters.size() + 1) throw ParseError("set indices must be consecutive");
      std::vector<int> members;
      long long v;
      while (ss >> v && v != -1) {
        if (v < 1 || std::size_t(v) > inst.vertices.size())
          throw ParseError("set member out of range: " + line);
        members.push_back(int(v - 1));
        inst.vertices[std::size_t(v - 1)].cluster = int(inst.clusters.size());
      }
      inst.clusters.push_back(std::move(members));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("unrecognized line: " + line);
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 1);
    if (key == "DIMENSION") dimension = std::size_t(std::stoll(value));
    if (key == "GTSP_SETS") sets = std::size_t(std::stoll(value));
  }
  if (inst.vertices.size() != dimension) throw ParseError("DIMENSION does not match node count");
  if (inst.clusters.size() != sets) throw ParseError("GTSP_SETS does not match set count");
  if (inst.clusters.empty() || inst.clusters[0].empty() || inst.clusters[0][0] != 0)
    throw ParseError("first set must contain vertex 1 (the start)");
  return inst;
}

}  // namespace gatsbi
