// Seeded generators for the regions, functions, curves, and product-space
// objects the verifiers sample.
//
// Generated regions are unions of fat primitives, strictly interior, and
// topologically stable: erosion or dilation by up to `ladder_depth` cells
// changes neither the component structure nor which distinguished points the
// mask holds.  Stability is what makes morphological regularity ladders and
// complement evaluations faithful at grid scale.  Distinguished points are
// kept `clearance` cells away from every generated boundary so measure
// evaluations never hit a degenerate configuration.
#pragma once

#include <utility>
#include <vector>

#include "qmeas/func.hpp"
#include "qmeas/region.hpp"
#include "qmeas/rng.hpp"
#include "qmeas/tensor.hpp"

namespace qmeas {

class Gen {
  public:
    Gen(const Grid& g, uint64_t seed, std::vector<Point> keep_clear = {})
        : grid_(g), rng_(seed), clear_(std::move(keep_clear)) {}

    const Grid& grid() const { return grid_; }
    Rng& rng() { return rng_; }

    static constexpr int ladder_depth = 4;
    static constexpr int clearance = 6;

    // Stable interior region; mask area within [3%, 60%] of the grid.
    Region region(RegionKind kind);
    // Independent pair (may overlap arbitrarily).
    std::pair<Region, Region> pair(RegionKind kind);
    // Disjoint pair with at least 3 cells of separation.
    std::pair<Region, Region> separated_pair(RegionKind kind);
    // a inside b with at least 1 cell of margin.
    std::pair<Region, Region> nested_pair(RegionKind kind);

    // Sum of 1..max_plateaus ramped plateaus; values in [0, ~2].
    CompactFunc nonneg_func(int max_plateaus = 3, int max_ramp = 5);
    // Difference of two plateau sums; mixed signs.
    CompactFunc signed_func();
    // Pair with cellwise product zero; each factor optionally mixed-sign.
    std::pair<CompactFunc, CompactFunc> disjoint_support_pair(bool allow_signed);

    // Piecewise-linear curve through (0,0) whose domain covers [lo, hi] and 0
    // with padding; values in [-2, 2].  Half the draws are monotone.
    PhiCurve phi(double lo, double hi);

  private:
    // Union of 1..3 primitives, interior, area-bounded, clear of the
    // distinguished points; no stability requirement (function cores).
    Region raw_region(RegionKind kind, double min_frac, double max_frac);
    bool clear_of_points(const Region& r, int radius) const;
    bool stable(const Region& r) const;

    Grid grid_;
    Rng rng_;
    std::vector<Point> clear_;
};

// Product-space draws combine one generator per factor space.
ProductRegion gen_product_region(Gen& gx, Gen& gy, RegionKind kind, int max_terms = 3);
// Tensor sum with coarse Y factors (small ramps), so sections take few
// distinct coefficient tuples and transform memoization stays effective.
TensorFunc gen_tensor_func(Gen& gx, Gen& gy, int max_terms = 2);

}  // namespace qmeas
