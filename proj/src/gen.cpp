#include "qmeas/gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmeas {

namespace {

constexpr int kMaxAttempts = 400;

}  // namespace

bool Gen::clear_of_points(const Region& r, int radius) const {
    const int n = grid_.n;
    for (const Point& p : clear_) {
        if (!grid_.contains(p.x, p.y)) continue;
        int pi = grid_.cell_i(p.x), pj = grid_.cell_j(p.y);
        bool inside = r.contains_cell(pi, pj);
        for (int dj = -radius; dj <= radius; ++dj) {
            for (int di = -radius; di <= radius; ++di) {
                int i = pi + di, j = pj + dj;
                if (i < 0 || i >= n || j < 0 || j >= n) return false;
                if (r.contains_cell(i, j) != inside) return false;
            }
        }
    }
    return true;
}

bool Gen::stable(const Region& r) const {
    int comps = r.component_count();
    int cocomps = r.complement().component_count();
    for (int j = 1; j <= ladder_depth; ++j) {
        Region er = r.erode(j);
        Region dr = r.dilate(j);
        if (!er.mask().any()) return false;
        if (er.component_count() != comps || dr.component_count() != comps) return false;
        if (er.complement().component_count() != cocomps ||
            dr.complement().component_count() != cocomps)
            return false;
    }
    return true;
}

Region Gen::raw_region(RegionKind kind, double min_frac, double max_frac) {
    const int cells = grid_.cells();
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        int primitives = rng_.uniform_int(1, 3);
        Region acc = Region::empty(grid_, kind);
        for (int p = 0; p < primitives; ++p) {
            if (rng_.coin()) {
                double w = rng_.uniform(0.12, 0.4);
                double h = rng_.uniform(0.12, 0.4);
                double fx = rng_.uniform(0.08, 0.9 - w);
                double fy = rng_.uniform(0.08, 0.9 - h);
                Point a = grid_.at_fraction(fx, fy);
                Point b = grid_.at_fraction(fx + w, fy + h);
                acc = acc.unite(Region::rectangle(grid_, kind, a.x, a.y, b.x, b.y));
            } else {
                double rf = rng_.uniform(0.09, 0.22);
                double fx = rng_.uniform(0.1 + rf, 0.9 - rf);
                double fy = rng_.uniform(0.1 + rf, 0.9 - rf);
                Point c = grid_.at_fraction(fx, fy);
                double radius = rf * std::min(grid_.x1 - grid_.x0, grid_.y1 - grid_.y0);
                acc = acc.unite(Region::disk(grid_, kind, c.x, c.y, radius));
            }
        }
        int count = acc.cell_count();
        if (count < cells * min_frac || count > cells * max_frac) continue;
        if (acc.dilate(clearance).touches_frame()) continue;
        if (!clear_of_points(acc, clearance)) continue;
        return acc;
    }
    throw std::logic_error("region generator: no acceptable draw");
}

Region Gen::region(RegionKind kind) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Region r = raw_region(kind, 0.03, 0.6);
        if (stable(r)) return r;
    }
    throw std::logic_error("region generator: no stable draw");
}

std::pair<Region, Region> Gen::pair(RegionKind kind) { return {region(kind), region(kind)}; }

std::pair<Region, Region> Gen::separated_pair(RegionKind kind) {
    // Both sides are capped well below half the frame and the first side is
    // redrawn periodically, so one sprawling draw cannot starve the search.
    for (int outer = 0; outer < 24; ++outer) {
        Region a = Region::empty(grid_, kind);
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            Region r = raw_region(kind, 0.03, 0.3);
            if (stable(r)) {
                a = r;
                break;
            }
        }
        if (!a.mask().any()) continue;
        Region fat = a.dilate(3);
        for (int attempt = 0; attempt < 16; ++attempt) {
            Region b = region(kind);
            if (!fat.intersects(b)) return {a, b};
        }
    }
    throw std::logic_error("region generator: no separated pair");
}

std::pair<Region, Region> Gen::nested_pair(RegionKind kind) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Region b = region(kind);
        Region a = b.erode(rng_.uniform_int(1, 3));
        if (!a.mask().any()) continue;
        if (!clear_of_points(a, 2)) continue;
        return {a, b};
    }
    throw std::logic_error("region generator: no nested pair");
}

CompactFunc Gen::nonneg_func(int max_plateaus, int max_ramp) {
    int k = rng_.uniform_int(1, std::max(1, max_plateaus));
    CompactFunc f = CompactFunc::zero(grid_);
    for (int p = 0; p < k; ++p) {
        Region core = raw_region(RegionKind::Compact, 0.01, 0.35);
        int ramp = rng_.uniform_int(1, std::max(1, max_ramp));
        double height = rng_.uniform(0.2, 1.2);
        f = f.add(CompactFunc::plateau(grid_, core, ramp, height));
    }
    return f;
}

CompactFunc Gen::signed_func() {
    return nonneg_func().add(nonneg_func(2, 4).scaled(-rng_.uniform(0.4, 1.1)));
}

std::pair<CompactFunc, CompactFunc> Gen::disjoint_support_pair(bool allow_signed) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Region c1 = raw_region(RegionKind::Compact, 0.01, 0.3);
        Region c2 = raw_region(RegionKind::Compact, 0.01, 0.3);
        int ramp = rng_.uniform_int(1, 3);
        // Supports are the cores dilated by the ramp; keep them 2 cells apart.
        if (c1.dilate(ramp + 2).intersects(c2.dilate(ramp))) continue;
        CompactFunc f1 = CompactFunc::plateau(grid_, c1, ramp, rng_.uniform(0.3, 1.2));
        CompactFunc f2 = CompactFunc::plateau(grid_, c2, ramp, rng_.uniform(0.3, 1.2));
        if (allow_signed) {
            if (rng_.coin()) f1 = f1.scaled(-1.0);
            if (rng_.coin()) f2 = f2.scaled(-1.0);
            // Mix signs inside one support when the core survives erosion.
            Region inner = c1.erode(ramp + 1);
            if (rng_.coin() && inner.mask().any())
                f1 = f1.add(CompactFunc::plateau(grid_, inner, 1, rng_.uniform(0.2, 0.8))
                                .scaled(f1.max_sample() > 0 ? -1.0 : 1.0));
        }
        return {f1, f2};
    }
    throw std::logic_error("function generator: no disjoint pair");
}

PhiCurve Gen::phi(double lo, double hi) {
    double span = std::max(hi - lo, 0.5);
    double dlo = std::min(lo, 0.0) - 0.15 * span;
    double dhi = std::max(hi, 0.0) + 0.15 * span;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<double> s{dlo, 0.0, dhi};
        int interior = rng_.uniform_int(2, 4);
        for (int k = 0; k < interior; ++k) s.push_back(rng_.uniform(dlo, dhi));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        bool spaced = true;
        for (size_t k = 1; k < s.size(); ++k)
            if (s[k] - s[k - 1] < 1e-6 * span) spaced = false;
        if (!spaced) continue;

        std::vector<double> v(s.size(), 0.0);
        if (rng_.coin()) {
            // Monotone increasing through (0, 0).
            size_t zero_at = 0;
            for (size_t k = 0; k < s.size(); ++k)
                if (s[k] == 0.0) zero_at = k;
            for (size_t k = zero_at + 1; k < s.size(); ++k)
                v[k] = v[k - 1] + rng_.uniform(0.05, 0.6);
            for (size_t k = zero_at; k-- > 0;) v[k] = v[k + 1] - rng_.uniform(0.05, 0.6);
        } else {
            for (size_t k = 0; k < s.size(); ++k) v[k] = s[k] == 0.0 ? 0.0 : rng_.uniform(-2.0, 2.0);
        }
        return PhiCurve(std::move(s), std::move(v));
    }
    throw std::logic_error("curve generator: no acceptable draw");
}

ProductRegion gen_product_region(Gen& gx, Gen& gy, RegionKind kind, int max_terms) {
    int k = gx.rng().uniform_int(1, std::max(1, max_terms));
    ProductRegion a = ProductRegion::empty(gx.grid(), gy.grid(), kind);
    for (int t = 0; t < k; ++t)
        a = a.unite(ProductRegion::product(gx.region(kind), gy.region(kind)));
    return a;
}

TensorFunc gen_tensor_func(Gen& gx, Gen& gy, int max_terms) {
    int k = gx.rng().uniform_int(1, std::max(1, max_terms));
    TensorFunc f = TensorFunc::zero(gx.grid(), gy.grid());
    for (int t = 0; t < k; ++t)
        f = f.add(TensorFunc::tensor(gx.nonneg_func(2, 4), gy.nonneg_func(2, 2)));
    return f;
}

}  // namespace qmeas
