// Regions are immutable cell masks over a Grid, tagged Open or Compact.
// The tag selects the digital-topology convention:
//   Open regions    use 8-connectivity, their complements 4-connectivity;
//   Compact regions use 4-connectivity, their complements 8-connectivity.
// This pairing keeps complementation consistent: complement() flips both the
// mask and the kind.  Primitive rasterization assigns cells straddling the
// primitive's boundary to Compact regions and excludes them from Open ones.
#pragma once

#include <cstdint>
#include <vector>

#include "qmeas/grid.hpp"

namespace qmeas {

enum class RegionKind { Open, Compact };

inline const char* kind_name(RegionKind k) { return k == RegionKind::Open ? "Open" : "Compact"; }
inline RegionKind opposite(RegionKind k) {
    return k == RegionKind::Open ? RegionKind::Compact : RegionKind::Open;
}

// Fixed-size bit mask over the cells of one grid.
class Bitmask {
  public:
    Bitmask() = default;
    explicit Bitmask(int cells) : cells_(cells), w_((cells + 63) / 64, 0) {}

    int cells() const { return cells_; }
    bool get(int idx) const { return (w_[idx >> 6] >> (idx & 63)) & 1u; }
    void set(int idx) { w_[idx >> 6] |= (uint64_t(1) << (idx & 63)); }
    void clear(int idx) { w_[idx >> 6] &= ~(uint64_t(1) << (idx & 63)); }

    int count() const;
    bool any() const;
    bool all() const;

    Bitmask operator~() const;
    Bitmask operator&(const Bitmask& o) const;
    Bitmask operator|(const Bitmask& o) const;
    // Set difference: bits in *this and not in o.
    Bitmask minus(const Bitmask& o) const;
    bool operator==(const Bitmask& o) const { return cells_ == o.cells_ && w_ == o.w_; }
    bool operator!=(const Bitmask& o) const { return !(*this == o); }
    bool is_subset_of(const Bitmask& o) const;
    bool intersects(const Bitmask& o) const;

  private:
    int cells_ = 0;
    std::vector<uint64_t> w_;
    void trim_tail();
};

class Region {
  public:
    Region(Grid grid, RegionKind kind, Bitmask mask)
        : grid_(grid), kind_(kind), mask_(std::move(mask)) {}

    static Region empty(const Grid& g, RegionKind kind) { return Region(g, kind, Bitmask(g.cells())); }
    static Region full(const Grid& g, RegionKind kind);
    // Axis-aligned rectangle and disk primitives.  Boundary-straddling cells
    // go to Compact regions and are dropped from Open ones.
    static Region rectangle(const Grid& g, RegionKind kind, double rx0, double ry0, double rx1, double ry1);
    static Region disk(const Grid& g, RegionKind kind, double cx, double cy, double r);

    const Grid& grid() const { return grid_; }
    RegionKind kind() const { return kind_; }
    const Bitmask& mask() const { return mask_; }

    bool contains_cell(int i, int j) const { return mask_.get(grid_.index(i, j)); }
    bool contains_index(int idx) const { return mask_.get(idx); }
    bool contains_point(double x, double y) const {
        if (!grid_.contains(x, y)) return false;
        return mask_.get(grid_.cell_of(x, y));
    }
    bool contains_point(const Point& p) const { return contains_point(p.x, p.y); }

    int cell_count() const { return mask_.count(); }
    bool empty_mask() const { return !mask_.any(); }
    bool is_full() const { return mask_.all(); }

    // Set algebra.  Binary operations require the same grid and kind.
    Region complement() const { return Region(grid_, opposite(kind_), ~mask_); }
    Region unite(const Region& o) const;
    Region intersect(const Region& o) const;
    Region minus(const Region& o) const;
    Region with_kind(RegionKind k) const { return Region(grid_, k, mask_); }
    bool is_subset_of(const Region& o) const;
    bool intersects(const Region& o) const;
    bool same_set(const Region& o) const { return grid_ == o.grid_ && mask_ == o.mask_; }

    // Connected components under this region's connectivity convention.
    std::vector<Region> components() const;
    int component_count() const;

    // Solid hull and holes of a connected region.  A hole is a complement
    // component (opposite connectivity) that does not reach the grid frame.
    // Throws NotConnected if the region has two or more components.
    Region solid_hull() const;
    std::vector<Region> holes() const;

    // Chebyshev-ball morphology; k >= 0 cells.  Cells outside the grid count
    // as inside the mask, so the frame does not erode.
    Region erode(int k) const;
    Region dilate(int k) const;

    // Chebyshev distance (in cells) from each cell to the nearest mask cell;
    // 0 on the mask, cells() if the mask is empty.
    std::vector<int> distance_from() const;

    // Kind, cell count, and cell bounding box, for witness reports.
    std::string describe() const;

    bool touches_frame() const;

  private:
    Grid grid_;
    RegionKind kind_;
    Bitmask mask_;
};

// Component labeling on a raw mask: labels[idx] = component id (0-based) or -1
// outside the mask.  Returns the number of components.
int label_components(const Grid& g, const Bitmask& mask, bool eight_connected,
                     std::vector<int32_t>& labels);

}  // namespace qmeas
