#pragma once

#include <string>
#include <vector>

#include "gatsbi/scenario.hpp"

namespace gatsbi {

struct BundledScenario {
  std::string name;
  std::vector<BoxShape> shapes;
  ScenarioConfig config;
};

// The five bundled inspection worlds: arch, covered, boxgirder, iron, steel.
const std::vector<BundledScenario>& bundled_scenarios();

// Bundled scenario by name, or nullptr.
const BundledScenario* find_bundled_scenario(const std::string& name);

// Scenario document text for one bundled world (load_world round-trips it).
std::string bundled_scenario_text(const BundledScenario& s);

}  // namespace gatsbi
