// Scenario registry and runner.  Each scenario reproduces one family of
// results as named check rows on seeded inputs; parameters come from a JSON
// config document
//
//   { "grid": {"n": 256}, "thresholds": {"k": 512}, "seed": 7,
//     "measures": {"x": {"variant": "...", "params": {...}},
//                  "y": {"variant": "...", "params": {...}}},
//     "coefficients": [ ... ] }
//
// Every key is optional.  Scenarios that study a fixed cast of measures use
// their built-in set when "measures" is absent and the configured pair when
// it is present; "coefficients" feeds the rectangle-family scenario.  Grid
// and threshold counts default per scenario.  Unknown keys anywhere are
// ConfigInvalid, with the JSON path of the offending key.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmeas/grid.hpp"
#include "qmeas/measure.hpp"
#include "qmeas/report.hpp"

namespace qmeas {

struct MeasureSpec {
    // lebesgue | three-point | point-mass | scaled-three-point |
    // corrupted-lebesgue (one negative cell, for fault-injection runs).
    std::string variant = "three-point";
    std::vector<Point> points;  // three-point override, rectangle fractions
    Point location{0.5, 0.5};   // point-mass location, rectangle fractions
    double weight = 1.0;        // point-mass weight
    double scale = 2.0;         // scaled-three-point factor
};

struct LabConfig {
    int grid_n = 0;      // 0 = scenario default
    int thresholds = 0;  // 0 = scenario default
    uint64_t seed = 7;
    bool has_measures = false;
    MeasureSpec x, y;
    std::vector<double> coefficients;
};

// Parses and validates the JSON document.  Throws ConfigInvalid with the
// path of the offending key.
LabConfig parse_config(const std::string& json_text);

TopMeasure build_measure(const MeasureSpec& spec, const Grid& g);

// Registered scenario names containing the filter substring, stable order.
std::vector<std::string> list_scenarios(const std::string& filter = {});

// Runs one scenario.  Throws UnknownScenario for unregistered names.
Report run_scenario(const std::string& name, const LabConfig& config);

// Runs every registered scenario in catalog order.  Each scenario draws its
// randomness from a generator forked off its own name, so parallel execution
// returns the same reports as sequential.
std::vector<Report> run_all(const LabConfig& config, bool parallel = false);

}  // namespace qmeas
