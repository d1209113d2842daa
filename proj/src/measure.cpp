#include "qmeas/measure.hpp"

#include <cmath>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

Point snap_to_cell_center(const Grid& g, Point p) {
    if (!g.contains(p.x, p.y)) throw OutOfDomain("measure point outside grid rectangle");
    return g.cell_center(g.cell_i(p.x), g.cell_j(p.y));
}

}  // namespace

TopMeasure TopMeasure::lebesgue(const Grid& g) {
    return grid_weights(g, std::vector<double>(g.cells(), g.cell_area()));
}

TopMeasure TopMeasure::grid_weights(const Grid& g, std::vector<double> weights) {
    if (static_cast<int>(weights.size()) != g.cells())
        throw std::invalid_argument("grid_weights: weight count does not match grid");
    TopMeasure m(g, MeasureVariant::Grid);
    m.weights_ = std::move(weights);
    return m;
}

TopMeasure TopMeasure::point_mass(const Grid& g, Point location, double weight) {
    if (!(weight > 0.0)) throw std::invalid_argument("point_mass: weight must be positive");
    TopMeasure m(g, MeasureVariant::PointMass);
    m.location_ = snap_to_cell_center(g, location);
    m.weight_ = weight;
    return m;
}

TopMeasure TopMeasure::three_point(const Grid& g) {
    return three_point(g, g.at_fraction(0.25, 0.5), g.at_fraction(0.75, 0.5),
                       g.at_fraction(0.5, 0.875));
}

TopMeasure TopMeasure::three_point(const Grid& g, Point p1, Point p2, Point p3) {
    TopMeasure m(g, MeasureVariant::ThreePoint);
    m.points_ = {snap_to_cell_center(g, p1), snap_to_cell_center(g, p2),
                 snap_to_cell_center(g, p3)};
    for (int k = 0; k < 3; ++k)
        m.point_cells_[k] = g.cell_of(m.points_[k].x, m.points_[k].y);
    if (m.point_cells_[0] == m.point_cells_[1] || m.point_cells_[0] == m.point_cells_[2] ||
        m.point_cells_[1] == m.point_cells_[2])
        throw DegenerateConfig("three_point: points must occupy distinct cells");
    return m;
}

TopMeasure TopMeasure::scaled(double c, TopMeasure inner) {
    if (!(c > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    TopMeasure m(inner.grid_, MeasureVariant::Scaled);
    m.scale_ = c;
    m.parts_.push_back(std::move(inner));
    return m;
}

TopMeasure TopMeasure::sum(std::vector<TopMeasure> parts) {
    if (parts.empty()) throw std::invalid_argument("sum: need at least one part");
    for (size_t k = 1; k < parts.size(); ++k)
        require_same_grid(parts[0].grid_, parts[k].grid_, "measure sum");
    TopMeasure m(parts[0].grid_, MeasureVariant::Sum);
    m.parts_ = std::move(parts);
    return m;
}

double TopMeasure::eval_impl(const Region& r, bool degeneracy_check) const {
    require_same_grid(grid_, r.grid(), "measure eval");
    switch (variant_) {
        case MeasureVariant::Grid: {
            double s = 0.0;
            for (int idx = 0; idx < grid_.cells(); ++idx)
                if (r.contains_index(idx)) s += weights_[idx];
            // The codomain is [0, inf); corrupted (negative) densities clamp,
            // which is what makes them detectable as additivity violations.
            return s > 0.0 ? s : 0.0;
        }
        case MeasureVariant::PointMass:
            return r.contains_point(location_) ? weight_ : 0.0;
        case MeasureVariant::ThreePoint: {
            if (degeneracy_check) {
                int n = grid_.n;
                for (int k = 0; k < 3; ++k) {
                    int idx = point_cells_[k];
                    int i = idx % n, j = idx / n;
                    bool inside = r.contains_index(idx);
                    for (int dj = -1; dj <= 1; ++dj) {
                        for (int di = -1; di <= 1; ++di) {
                            int ii = i + di, jj = j + dj;
                            if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                            if (r.contains_cell(ii, jj) != inside)
                                throw DegenerateConfig(
                                    "three_point eval: point on a mask boundary cell");
                        }
                    }
                }
            }
            if (r.kind() == RegionKind::Compact)
                return three_point_solid_decomposition(grid_, r.mask(), RegionKind::Compact,
                                                       point_cells_);
            // Open regions: evaluate through the compact complement, then
            // cross-check against the direct decomposition of the open mask.
            double via_complement = 1.0 - three_point_solid_decomposition(
                                              grid_, ~r.mask(), RegionKind::Compact, point_cells_);
            double direct = three_point_solid_decomposition(grid_, r.mask(), RegionKind::Open,
                                                            point_cells_);
            if (via_complement != direct)
                throw std::logic_error(
                    "three_point eval: complement route disagrees with direct decomposition");
            return via_complement;
        }
        case MeasureVariant::Scaled:
            return scale_ * parts_[0].eval_impl(r, degeneracy_check);
        case MeasureVariant::Sum: {
            double s = 0.0;
            for (const TopMeasure& p : parts_) s += p.eval_impl(r, degeneracy_check);
            return s;
        }
    }
    return 0.0;
}

double TopMeasure::total() const { return eval(Region::full(grid_, RegionKind::Open)); }

bool TopMeasure::is_measure() const {
    switch (variant_) {
        case MeasureVariant::Grid:
        case MeasureVariant::PointMass:
            return true;
        case MeasureVariant::ThreePoint:
            return false;
        case MeasureVariant::Scaled:
            return parts_[0].is_measure();
        case MeasureVariant::Sum:
            for (const TopMeasure& p : parts_)
                if (!p.is_measure()) return false;
            return true;
    }
    return false;
}

std::optional<double> TopMeasure::two_valued() const {
    switch (variant_) {
        case MeasureVariant::ThreePoint:
            return 1.0;
        case MeasureVariant::PointMass:
            return weight_;
        case MeasureVariant::Scaled: {
            auto inner = parts_[0].two_valued();
            if (inner) return scale_ * *inner;
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

std::optional<TopMeasure::PointAtom> TopMeasure::as_point_mass() const {
    switch (variant_) {
        case MeasureVariant::PointMass:
            return PointAtom{location_, weight_};
        case MeasureVariant::Scaled: {
            auto inner = parts_[0].as_point_mass();
            if (inner) return PointAtom{inner->location, scale_ * inner->weight};
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

std::optional<std::vector<double>> TopMeasure::as_density() const {
    switch (variant_) {
        case MeasureVariant::Grid:
            return weights_;
        case MeasureVariant::PointMass: {
            std::vector<double> w(grid_.cells(), 0.0);
            w[grid_.cell_of(location_.x, location_.y)] = weight_;
            return w;
        }
        case MeasureVariant::ThreePoint:
            return std::nullopt;
        case MeasureVariant::Scaled: {
            auto inner = parts_[0].as_density();
            if (!inner) return std::nullopt;
            for (double& v : *inner) v *= scale_;
            return inner;
        }
        case MeasureVariant::Sum: {
            std::vector<double> acc(grid_.cells(), 0.0);
            for (const TopMeasure& p : parts_) {
                auto inner = p.as_density();
                if (!inner) return std::nullopt;
                for (int i = 0; i < grid_.cells(); ++i) acc[i] += (*inner)[i];
            }
            return acc;
        }
    }
    return std::nullopt;
}

std::vector<Point> TopMeasure::special_points() const {
    switch (variant_) {
        case MeasureVariant::PointMass:
            return {location_};
        case MeasureVariant::ThreePoint:
            return {points_[0], points_[1], points_[2]};
        case MeasureVariant::Scaled:
        case MeasureVariant::Sum: {
            std::vector<Point> out;
            for (const TopMeasure& p : parts_) {
                auto sub = p.special_points();
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        default:
            return {};
    }
}

const std::vector<double>& TopMeasure::weights() const {
    if (variant_ != MeasureVariant::Grid)
        throw std::logic_error("weights(): not a grid measure");
    return weights_;
}

std::array<Point, 3> TopMeasure::points() const {
    if (variant_ != MeasureVariant::ThreePoint)
        throw std::logic_error("points(): not a three-point measure");
    return points_;
}

std::string TopMeasure::describe() const {
    switch (variant_) {
        case MeasureVariant::Grid:
            return "grid";
        case MeasureVariant::PointMass:
            return "point-mass";
        case MeasureVariant::ThreePoint:
            return "three-point";
        case MeasureVariant::Scaled:
            return "scaled(" + std::to_string(scale_) + ", " + parts_[0].describe() + ")";
        case MeasureVariant::Sum: {
            std::string s = "sum(";
            for (size_t k = 0; k < parts_.size(); ++k)
                s += (k ? ", " : "") + parts_[k].describe();
            return s + ")";
        }
    }
    return "?";
}

}  // namespace qmeas
