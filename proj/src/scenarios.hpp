// Internal registry contract between the runner and the scenario bodies.
#pragma once

#include <cstdint>
#include <vector>

#include "qmeas/lab.hpp"

namespace qmeas {

// Resolved inputs handed to a scenario body.  The seed is already forked off
// the scenario name, so bodies draw from it directly.
struct ScenarioContext {
    const LabConfig* config = nullptr;
    int n = 0;      // grid cells per axis
    int k = 0;      // threshold ladder size
    uint64_t seed = 0;
};

struct ScenarioDef {
    const char* name;
    int default_n;
    int default_k;
    std::vector<CheckRow> (*run)(const ScenarioContext&);
};

// Catalog in stable execution and listing order.
const std::vector<ScenarioDef>& scenario_table();

}  // namespace qmeas
