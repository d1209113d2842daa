// Canonical counterexample geometry for two-valued non-measures with three
// distinguished points.
//
// Two thick corridors along an L-shaped path between two of the points, each
// holding exactly one point, overlapping in the middle.  Each corridor alone
// leaves the other two points in one connected piece of its complement, so it
// evaluates to 0; the union connects two of the three points and evaluates to
// the full mass.  The same cell masks work for both region kinds.
#pragma once

#include <optional>
#include <utility>

#include "qmeas/func.hpp"
#include "qmeas/measure.hpp"
#include "qmeas/region.hpp"

namespace qmeas {

// Overlapping same-kind pair (A, B) with mu(A) = mu(B) = 0 but
// mu(A.unite(B)) = mu(X).  Empty when mu is not a two-valued non-measure
// with three distinguished points.  Throws DegenerateConfig when the points
// sit too close together or too close to the frame to host the corridors.
std::optional<std::pair<Region, Region>> nonsubadditive_pair(const TopMeasure& m, RegionKind kind);

// Nonlinearity pieces for the quasi-integral of such a measure: g is
// supported inside u, h inside v, g + h is a unit plateau over the whole
// corridor.  The quasi-integral maps g and h to 0 but g + h to mu(X).
struct PartitionPieces {
    Region u, v;
    CompactFunc g, h;
};
std::optional<PartitionPieces> majority_partition(const TopMeasure& m);

}  // namespace qmeas
