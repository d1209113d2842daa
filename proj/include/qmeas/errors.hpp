// Error types thrown by the library.  Every error corresponds to a violated
// precondition; none of them indicate internal state corruption.
#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

// Two objects living on different grids were combined.
struct GridMismatch : std::invalid_argument {
    explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A function value left the domain of a piecewise-linear curve.
struct DomainMismatch : std::invalid_argument {
    explicit DomainMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// An operation that requires a connected region was given a disconnected one.
struct NotConnected : std::invalid_argument {
    explicit NotConnected(const std::string& what) : std::invalid_argument(what) {}
};

// A point argument lies outside the grid rectangle.
struct OutOfDomain : std::invalid_argument {
    explicit OutOfDomain(const std::string& what) : std::invalid_argument(what) {}
};

// A distinguished point of a measure sits on a mask boundary cell, so the
// rasterized evaluation would not be faithful.  Caller must re-rasterize.
struct DegenerateConfig : std::invalid_argument {
    explicit DegenerateConfig(const std::string& what) : std::invalid_argument(what) {}
};

// The measure takes too few distinct values for the requested construction.
struct NotEnoughValues : std::invalid_argument {
    explicit NotEnoughValues(const std::string& what) : std::invalid_argument(what) {}
};

// Neither product-measure formula applies to the given pair.
struct NotAProductTM : std::invalid_argument {
    explicit NotAProductTM(const std::string& what) : std::invalid_argument(what) {}
};

// The family construction does not apply (the two orders already agree).
struct NotApplicable : std::invalid_argument {
    explicit NotApplicable(const std::string& what) : std::invalid_argument(what) {}
};

// Scenario registry lookup failed.
struct UnknownScenario : std::invalid_argument {
    explicit UnknownScenario(const std::string& what) : std::invalid_argument(what) {}
};

// A configuration value is missing, has the wrong type, or is out of range.
// `path` is the JSON path of the offending key (e.g. "measures.x.variant").
struct ConfigInvalid : std::invalid_argument {
    std::string path;
    ConfigInvalid(const std::string& key_path, const std::string& what)
        : std::invalid_argument("config invalid at '" + key_path + "': " + what), path(key_path) {}
};

}  // namespace qmeas
