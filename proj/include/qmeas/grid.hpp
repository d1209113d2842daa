// Discretization of a compact axis-aligned rectangle into an n-by-n grid of
// square-ish cells.  Cells are indexed (i, j) with i the x (column) index and
// j the y (row) index; the linear index is j * n + i.  A real point maps to
// the cell whose half-open box [x0 + i*hx, x0 + (i+1)*hx) x [...] contains it,
// with the top/right edges clamped into the last cell so the rectangle stays
// compact.
#pragma once

#include <cmath>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Grid {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
    int n = 0;  // cells per axis; total cell count is n*n

    Grid() = default;
    Grid(double ax0, double ax1, double ay0, double ay1, int cells_per_axis)
        : x0(ax0), x1(ax1), y0(ay0), y1(ay1), n(cells_per_axis) {
        if (!(x0 < x1) || !(y0 < y1))
            throw std::invalid_argument("grid: empty rectangle");
        if (n < 8)
            throw std::invalid_argument("grid: need at least 8 cells per axis");
    }

    static Grid unit_square(int cells_per_axis) { return Grid(0.0, 1.0, 0.0, 1.0, cells_per_axis); }

    double hx() const { return (x1 - x0) / n; }
    double hy() const { return (y1 - y0) / n; }
    // Characteristic cell size used in tolerance formulas.
    double h() const { return hx() > hy() ? hx() : hy(); }
    int cells() const { return n * n; }
    double area() const { return (x1 - x0) * (y1 - y0); }
    double cell_area() const { return hx() * hy(); }

    int index(int i, int j) const { return j * n + i; }
    double cell_cx(int i) const { return x0 + (i + 0.5) * hx(); }
    double cell_cy(int j) const { return y0 + (j + 0.5) * hy(); }
    Point cell_center(int i, int j) const { return {cell_cx(i), cell_cy(j)}; }

    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }

    int cell_i(double x) const {
        int i = static_cast<int>(std::floor((x - x0) / hx()));
        return i < 0 ? 0 : (i >= n ? n - 1 : i);
    }
    int cell_j(double y) const {
        int j = static_cast<int>(std::floor((y - y0) / hy()));
        return j < 0 ? 0 : (j >= n ? n - 1 : j);
    }
    int cell_of(double x, double y) const { return index(cell_i(x), cell_j(y)); }

    // Converts normalized [0,1]^2 coordinates to rectangle coordinates.
    Point at_fraction(double fx, double fy) const {
        return {x0 + fx * (x1 - x0), y0 + fy * (y1 - y0)};
    }

    bool operator==(const Grid& o) const {
        return x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1 && n == o.n;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    std::string describe() const {
        return "[" + std::to_string(x0) + "," + std::to_string(x1) + "]x[" + std::to_string(y0) +
               "," + std::to_string(y1) + "] n=" + std::to_string(n);
    }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* op) {
    if (a != b) throw GridMismatch(std::string(op) + ": grids differ (" + a.describe() + " vs " + b.describe() + ")");
}

}  // namespace qmeas
