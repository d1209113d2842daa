// Finite topological measures on a discretized compact rectangle, evaluated
// on Regions.  All variants are monotone and additive on separated pairs;
// only some are subadditive (genuine measures):
//
//   GridMeasure  nonnegative cell weights, evaluated by masked summation;
//                a measure.  lebesgue() is the uniform density.
//   PointMass    weight * [location in region]; a measure.
//   ThreePoint   the simple (two-valued, unit total) measure defined by
//                majority over three distinguished points and extended to
//                arbitrary regions by solid decomposition; not subadditive.
//   Scaled       c times an inner measure, c > 0.
//   Sum          finite sum of inner measures.
//
// Three-point evaluation of a Compact region decomposes it into connected
// components; each component contributes 1 exactly when no component of its
// complement holds two of the three points (equivalently: majority of the
// solid hull minus majorities of the holes, with frame-reaching complement
// pieces accounted separately so that additivity survives regions touching
// the boundary).  Open regions are evaluated through the complement and
// cross-checked against the direct decomposition; the two routes must agree.
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/func.hpp"
#include "qmeas/region.hpp"

namespace qmeas {

enum class MeasureVariant { Grid, PointMass, ThreePoint, Scaled, Sum };

class TopMeasure {
  public:
    struct PointAtom {
        Point location;
        double weight;
    };

    static TopMeasure lebesgue(const Grid& g);
    // weights[cell] >= 0 is the mass of that cell (density times cell area).
    static TopMeasure grid_weights(const Grid& g, std::vector<double> weights);
    // Location snaps to the center of its cell so membership is unambiguous.
    static TopMeasure point_mass(const Grid& g, Point location, double weight);
    // Default points (as fractions of the rectangle): (0.25, 0.5),
    // (0.75, 0.5), (0.5, 0.875).  Points snap to cell centers.
    static TopMeasure three_point(const Grid& g);
    static TopMeasure three_point(const Grid& g, Point p1, Point p2, Point p3);
    static TopMeasure scaled(double c, TopMeasure inner);
    static TopMeasure sum(std::vector<TopMeasure> parts);

    const Grid& grid() const { return grid_; }
    MeasureVariant variant() const { return variant_; }

    // Evaluates the region.  Checks that no distinguished point sits on a
    // mask boundary cell (throws DegenerateConfig), which would make the
    // rasterized answer unreliable.
    double eval(const Region& r) const { return eval_impl(r, true); }
    // Evaluation for superlevel masks of sampled functions, where membership
    // is exact by construction and the degeneracy check does not apply.
    double eval_superlevel(const Region& r) const { return eval_impl(r, false); }

    double total() const;

    // Structural predicates used to pick evaluation strategies.
    bool is_measure() const;
    std::optional<double> two_valued() const;       // c when the range is {0, c}
    std::optional<PointAtom> as_point_mass() const;
    // Flattened per-cell weights when evaluation reduces to masked summation
    // (no three-point part anywhere in the tree); enables sorted-sample
    // distribution evaluation.
    std::optional<std::vector<double>> as_density() const;
    std::vector<Point> special_points() const;
    const std::vector<double>& weights() const;     // GridMeasure only
    std::array<Point, 3> points() const;            // ThreePoint only
    double scale() const { return scale_; }         // Scaled only
    const std::vector<TopMeasure>& parts() const { return parts_; }

    std::string describe() const;

  private:
    TopMeasure(Grid g, MeasureVariant v) : grid_(g), variant_(v) {}
    double eval_impl(const Region& r, bool degeneracy_check) const;

    Grid grid_;
    MeasureVariant variant_;
    std::vector<double> weights_;        // Grid
    Point location_{};                   // PointMass
    double weight_ = 0.0;                // PointMass
    std::array<Point, 3> points_{};      // ThreePoint
    std::array<int, 3> point_cells_{};   // ThreePoint
    double scale_ = 1.0;                 // Scaled
    std::vector<TopMeasure> parts_;      // Scaled (1 entry) and Sum
};

// Internal three-point algorithm, exposed for direct testing.  Evaluates the
// mask via component/complement decomposition under the kind's connectivity
// pairing.  The result of every connected component is 0 or 1 and the total
// for any mask lies in {0, 1}; both are asserted.
double three_point_solid_decomposition(const Grid& g, const Bitmask& mask, RegionKind kind,
                                       const std::array<int, 3>& point_cells);

}  // namespace qmeas
