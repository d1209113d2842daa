// Sets and functions on the product of two grid rectangles, kept symbolic so
// sections never require 4-D storage.
//
// A ProductRegion is a finite union of product terms R x S with one shared
// kind; its section at a point y of the Y rectangle is the union of the R's
// whose S contains y, computed by mask algebra.  Complementation expands
// De Morgan products and flips the kind, so it is kept for small term counts.
//
// A TensorFunc is a finite sum sum_i g_i (x) h_i (y); its section at y is the
// exact linear combination sum_i h_i(y) g_i on the X grid.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmeas/func.hpp"
#include "qmeas/region.hpp"

namespace qmeas {

struct ProductTerm {
    Region rx;  // factor on the X grid
    Region sy;  // factor on the Y grid
};

class ProductRegion {
  public:
    // Single term R x S; both factors must share the kind.
    static ProductRegion product(Region rx, Region sy);
    static ProductRegion empty(const Grid& gx, const Grid& gy, RegionKind kind);
    static ProductRegion full(const Grid& gx, const Grid& gy, RegionKind kind);

    const Grid& grid_x() const { return gx_; }
    const Grid& grid_y() const { return gy_; }
    RegionKind kind() const { return kind_; }
    const std::vector<ProductTerm>& terms() const { return terms_; }

    // Union; requires equal grids and kind.
    ProductRegion unite(const ProductRegion& o) const;
    // De Morgan expansion of the complement of the term union; the kind
    // flips.  Throws std::length_error beyond 64 result terms.
    ProductRegion complement() const;

    // Slice {x : (x, y) in A} on the X grid; kind is the region's kind.
    // Throws OutOfDomain when the point leaves the Y rectangle.
    Region section_at_y(const Point& y) const;
    // Slice {y : (x, y) in A} on the Y grid.
    Region section_at_x(const Point& x) const;

    bool contains(const Point& px, const Point& py) const;

    std::string describe() const;

  private:
    ProductRegion(Grid gx, Grid gy, RegionKind kind) : gx_(gx), gy_(gy), kind_(kind) {}
    Grid gx_, gy_;
    RegionKind kind_;
    std::vector<ProductTerm> terms_;
};

// The partition of Y cells by which section region they induce.  A k-term
// region has at most 2^k distinct sections, so evaluating a measure on every
// section costs at most 2^k evaluations instead of one per Y cell.
class SectionProfile {
  public:
    explicit SectionProfile(const ProductRegion& a);

    struct Class {
        uint64_t membership;  // bit i set when S_i contains the class's cells
        Bitmask y_cells;      // cells of the Y grid in this class
        Region section;       // the common section A_y on the X grid
    };

    const std::vector<Class>& classes() const { return classes_; }

    // Union of the y_cells of every class accepted by `keep`, as a Region of
    // the given kind on the Y grid.
    template <typename Pred>
    Region select(const Pred& keep, RegionKind kind) const {
        Bitmask m(gy_.cells());
        for (const Class& c : classes_)
            if (keep(c)) m = m | c.y_cells;
        return Region(gy_, kind, m);
    }

  private:
    Grid gy_;
    std::vector<Class> classes_;
};

class TensorFunc {
  public:
    struct Term {
        CompactFunc g;  // factor on the X grid
        CompactFunc h;  // factor on the Y grid
    };

    static TensorFunc zero(const Grid& gx, const Grid& gy);
    static TensorFunc tensor(CompactFunc g, CompactFunc h);

    const Grid& grid_x() const { return gx_; }
    const Grid& grid_y() const { return gy_; }
    const std::vector<Term>& terms() const { return terms_; }

    TensorFunc add(const TensorFunc& o) const;
    TensorFunc scaled(double a) const;
    // Term-by-term product (g_i g_j) x (h_i h_j); term count multiplies.
    TensorFunc multiply(const TensorFunc& o) const;

    double at(const Point& px, const Point& py) const;

    // Section sum_i h_i(y) g_i as a function on the X grid.
    CompactFunc section_at_y(const Point& y) const;
    CompactFunc section_at_x(const Point& x) const;
    // The coefficient tuple (h_1(y), ..., h_k(y)) at a Y cell; sections with
    // equal tuples are equal functions, which is what transform memoization
    // keys on.
    std::vector<double> y_coefficients(int y_cell) const;
    std::vector<double> x_coefficients(int x_cell) const;
    // Section from a coefficient tuple: sum_i c_i g_i (or c_i h_i).
    CompactFunc combine_x(const std::vector<double>& c) const;
    CompactFunc combine_y(const std::vector<double>& c) const;

    // sum_i |g_i| |h_i|, an upper bound for the sup norm.
    double sup_norm_bound() const;
    // Exact sup over all cell pairs; quadratic in the cell count, intended
    // for coarse grids.
    double sup_norm_exact() const;

  private:
    TensorFunc(Grid gx, Grid gy) : gx_(gx), gy_(gy) {}
    Grid gx_, gy_;
    std::vector<Term> terms_;
};

}  // namespace qmeas
