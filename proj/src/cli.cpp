#include "gatsbi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gatsbi/baseline.hpp"
#include "gatsbi/executor.hpp"
#include "gatsbi/scenario.hpp"
#include "gatsbi/scenarios.hpp"

namespace gatsbi::cli {

namespace {

namespace fs = std::filesystem;

Scenario load_scenario_arg(const std::string& arg) {
  if (fs::exists(arg)) {
    std::ifstream in(arg);
    if (!in) throw ParseError("cannot open scenario file: " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_world(ss.str(), fs::path(arg).stem().string());
  }
  if (const BundledScenario* b = find_bundled_scenario(arg))
    return load_world(bundled_scenario_text(*b), b->name);
  throw ParseError("unknown scenario (not a file, not a bundled name): " + arg);
}

MissionLog execute(const Scenario& sc, const std::string& planner,
                   SemanticOccupancyGrid* grid_out) {
  if (planner == "gatsbi") {
    Mission mission(sc.world, sc.config);
    MissionLog log = mission.run();
    if (grid_out) *grid_out = mission.state().grid;
    return log;
  }
  return run_frontier_mission(sc.world, sc.config, grid_out);
}

void write_outputs(const fs::path& dir, const MissionLog& log,
                   const SemanticOccupancyGrid& grid) {
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "timeline.csv");
    log.write_timeline_csv(os);
  }
  {
    std::ofstream os(dir / "timing.csv");
    log.write_timing_csv(os);
  }
  {
    std::ofstream os(dir / "map.csv");
    grid.write_csv(os);
  }
}

void print_summary(const std::string& name, const std::string& planner,
                   const MissionLog& log) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s/%s: inspected %.2f%% of %lld inspectable voxels, %.1f m flown, "
                "%.1f s simulated, %zu left uninspected",
                name.c_str(), planner.c_str(), log.final_percent,
                static_cast<long long>(log.inspectable_count), log.total_distance_m,
                log.total_time_s, log.uninspectable_remainder.size());
  std::cout << buf << "\n";
}

double pct_at(const MissionLog& log, double t) {
  double pct = 0.0;
  for (const TimelineRow& row : log.timeline) {
    if (row.clock_s > t) break;
    pct = row.pct_inspected;
  }
  return pct;
}

struct Stats {
  double mean = 0.0, lo = 0.0, hi = 0.0, sd = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats st;
  if (xs.empty()) return st;
  st.lo = *std::min_element(xs.begin(), xs.end());
  st.hi = *std::max_element(xs.begin(), xs.end());
  for (double x : xs) st.mean += x;
  st.mean /= double(xs.size());
  for (double x : xs) st.sd += (x - st.mean) * (x - st.mean);
  st.sd = std::sqrt(st.sd / double(xs.size()));
  return st;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(item, &used);
    if (used != item.size()) throw ParseError("bad seed list entry: " + item);
    seeds.push_back(v);
  }
  if (seeds.empty()) throw ParseError("seed list is empty");
  return seeds;
}

int cmd_run(const Scenario& sc, const std::string& planner, const std::string& out) {
  SemanticOccupancyGrid grid(sc.world.voxel_size(), sc.world.bounds());
  const MissionLog log = execute(sc, planner, &grid);
  const fs::path dir = fs::path(out) / sc.config.name / planner;
  write_outputs(dir, log, grid);
  print_summary(sc.config.name, planner, log);
  std::cout << "outputs in " << dir.string() << "\n";
  return 0;
}

int cmd_compare(const Scenario& base, const std::vector<std::uint64_t>& seeds,
                const std::string& out) {
  struct Entry {
    std::string planner;
    std::uint64_t seed;
    MissionLog log;
  };
  std::vector<Entry> entries;
  const fs::path root = fs::path(out) / base.config.name;

  for (std::uint64_t seed : seeds) {
    for (const std::string planner : {"gatsbi", "frontier"}) {
      Scenario sc = base;
      sc.config.rng_seed = seed;
      SemanticOccupancyGrid grid(sc.world.voxel_size(), sc.world.bounds());
      MissionLog log = execute(sc, planner, &grid);
      write_outputs(root / ("seed" + std::to_string(seed)) / planner, log, grid);
      print_summary(base.config.name + "[seed " + std::to_string(seed) + "]", planner, log);
      entries.push_back({planner, seed, std::move(log)});
    }
  }

  double t_max = 0.0;
  for (const Entry& e : entries) t_max = std::max(t_max, e.log.total_time_s);
  const double step = 5.0;

  {
    std::ofstream os(root / "comparison.csv");
    os << "clock_s";
    for (const Entry& e : entries) os << "," << e.planner << "_seed" << e.seed << "_pct";
    os << "\n";
    char buf[64];
    for (double t = 0.0; t <= t_max + step; t += step) {
      std::snprintf(buf, sizeof buf, "%.1f", t);
      os << buf;
      for (const Entry& e : entries) {
        std::snprintf(buf, sizeof buf, ",%.6f", pct_at(e.log, t));
        os << buf;
      }
      os << "\n";
    }
  }

  {
    std::ofstream os(root / "summary.csv");
    os << "planner,metric,mean,min,max,std\n";
    char buf[160];
    for (const std::string planner : {"gatsbi", "frontier"}) {
      std::vector<double> dist, time, pct;
      for (const Entry& e : entries) {
        if (e.planner != planner) continue;
        dist.push_back(e.log.total_distance_m);
        time.push_back(e.log.total_time_s);
        pct.push_back(e.log.final_percent);
      }
      const std::pair<const char*, Stats> rows[] = {{"distance_m", stats_of(dist)},
                                                    {"time_s", stats_of(time)},
                                                    {"final_percent", stats_of(pct)}};
      for (const auto& [metric, st] : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.3f,%.3f,%.3f,%.3f\n", planner.c_str(), metric,
                      st.mean, st.lo, st.hi, st.sd);
        os << buf;
      }
    }
  }

  std::cout << "comparison in " << root.string() << "\n";
  return 0;
}

int cmd_gen_worlds(const std::string& out) {
  fs::create_directories(out);
  for (const BundledScenario& b : bundled_scenarios()) {
    const fs::path file = fs::path(out) / (b.name + ".json");
    std::ofstream os(file);
    os << bundled_scenario_text(b);
    std::cout << "wrote " << file.string() << "\n";
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"semantic bridge inspection simulator"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::string planner = "gatsbi";
  std::string out = "runs";
  std::string seeds_arg;
  std::string opportunistic;
  std::uint64_t seed = 0;
  double dd = 0.0;
  double rpt = 0.0;

  CLI::App* run = app.add_subcommand("run", "Run one inspection mission");
  run->add_option("--scenario", scenario_arg, "Scenario file or bundled name")->required();
  run->add_option("--planner", planner, "gatsbi or frontier")
      ->check(CLI::IsMember({"gatsbi", "frontier"}));
  CLI::Option* run_seed = run->add_option("--seed", seed, "Override the scenario seed");
  CLI::Option* run_dd = run->add_option("--dd", dd, "Detour discrepancy threshold, meters");
  CLI::Option* run_rpt = run->add_option("--rpt", rpt, "Replanning time per tour, seconds");
  CLI::Option* run_opp =
      run->add_option("--opportunistic", opportunistic, "Per-waypoint inspection credit")
          ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--out", out, "Output directory root");

  CLI::App* cmp = app.add_subcommand("compare", "Run both planners over a seed list");
  cmp->add_option("--scenario", scenario_arg, "Scenario file or bundled name")->required();
  cmp->add_option("--seeds", seeds_arg, "Comma separated seed list")->required();
  CLI::Option* cmp_dd = cmp->add_option("--dd", dd, "Detour discrepancy threshold, meters");
  CLI::Option* cmp_rpt = cmp->add_option("--rpt", rpt, "Replanning time per tour, seconds");
  CLI::Option* cmp_opp =
      cmp->add_option("--opportunistic", opportunistic, "Per-waypoint inspection credit")
          ->check(CLI::IsMember({"on", "off"}));
  cmp->add_option("--out", out, "Output directory root");

  CLI::App* gen = app.add_subcommand("gen-worlds", "Write the bundled scenario files");
  gen->add_option("--out", out, "Output directory");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("gatsbi");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_worlds(out);

    Scenario sc = load_scenario_arg(scenario_arg);
    if (run->parsed()) {
      if (run_seed->count()) sc.config.rng_seed = seed;
      if (run_dd->count()) sc.config.dd = dd;
      if (run_rpt->count()) sc.config.rpt = rpt;
      if (run_opp->count()) sc.config.opportunistic = (opportunistic == "on");
      return cmd_run(sc, planner, out);
    }
    if (cmp->parsed()) {
      if (cmp_dd->count()) sc.config.dd = dd;
      if (cmp_rpt->count()) sc.config.rpt = rpt;
      if (cmp_opp->count()) sc.config.opportunistic = (opportunistic == "on");
      return cmd_compare(sc, parse_seed_list(seeds_arg), out);
    }
  } catch (const MissionError& e) {
    std::cerr << "mission failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace gatsbi::cli
