// Scenario reports: named check rows with expected/actual/tolerance values,
// serialized as canonical JSON, CSV, or an aligned text table.
//
// The JSON form is canonical: keys sorted, numbers at 12 significant digits,
// and no wall time, so reruns with the same seed and config are
// byte-identical.  The table form carries the wall time for humans.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmeas {

struct CheckRow {
    std::string name;    // short identifier of the check
    std::string detail;  // conclusion tag or free-form context
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string scenario;
    std::string config_echo;  // resolved config as canonical JSON
    uint64_t seed = 0;
    std::vector<CheckRow> checks;
    double wall_ms = 0.0;

    bool pass() const;
};

// Number formatting shared by every serializer: %.12g.
std::string format_num(double v);

std::string to_json(const Report& r);
// Reports for a whole run, as a canonical JSON array in the given order.
std::string to_json(const std::vector<Report>& reports);
std::string to_csv(const Report& r);
std::string to_csv(const std::vector<Report>& reports);
std::string to_table(const Report& r);
std::string to_table(const std::vector<Report>& reports);

}  // namespace qmeas
