#include "qmeas/func.hpp"

#include <algorithm>
#include <cmath>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

Region support_of(const Grid& g, const std::vector<double>& s) {
    Bitmask m(g.cells());
    for (int idx = 0; idx < g.cells(); ++idx)
        if (s[idx] != 0.0) m.set(idx);
    return Region(g, RegionKind::Compact, m);
}

}  // namespace

CompactFunc::CompactFunc(Grid g, std::vector<double> s)
    : grid_(g), samples_(std::move(s)), support_(support_of(g, samples_)) {
    min_ = 0.0;
    max_ = 0.0;
    if (!samples_.empty()) {
        min_ = samples_[0];
        max_ = samples_[0];
        for (double v : samples_) {
            if (v < min_) min_ = v;
            if (v > max_) max_ = v;
        }
    }
    sup_norm_ = std::max(std::fabs(min_), std::fabs(max_));
}

CompactFunc CompactFunc::zero(const Grid& g) {
    return CompactFunc(g, std::vector<double>(g.cells(), 0.0));
}

CompactFunc CompactFunc::from_samples(const Grid& g, std::vector<double> samples) {
    if (static_cast<int>(samples.size()) != g.cells())
        throw std::invalid_argument("from_samples: sample count does not match grid");
    return CompactFunc(g, std::move(samples));
}

CompactFunc CompactFunc::plateau(const Grid& g, const Region& core, int ramp_cells,
                                 double height) {
    require_same_grid(g, core.grid(), "plateau");
    if (ramp_cells < 0) throw std::invalid_argument("plateau: negative ramp");
    std::vector<double> s(g.cells(), 0.0);
    if (core.empty_mask()) return CompactFunc(g, std::move(s));
    std::vector<int> dist = core.distance_from();
    double denom = ramp_cells + 1;
    for (int idx = 0; idx < g.cells(); ++idx) {
        int d = dist[idx];
        if (d <= ramp_cells) s[idx] = height * (1.0 - d / denom);
    }
    return CompactFunc(g, std::move(s));
}

CompactFunc CompactFunc::coordinate_x(const Grid& g, double offset) {
    std::vector<double> s(g.cells());
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) s[g.index(i, j)] = g.cell_cx(i) - offset;
    return CompactFunc(g, std::move(s));
}

CompactFunc CompactFunc::coordinate_y(const Grid& g, double offset) {
    std::vector<double> s(g.cells());
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) s[g.index(i, j)] = g.cell_cy(j) - offset;
    return CompactFunc(g, std::move(s));
}

CompactFunc CompactFunc::bump(const Grid& g, double cx, double cy, double sigma, double height,
                              const Region& window) {
    require_same_grid(g, window.grid(), "bump");
    std::vector<double> s(g.cells(), 0.0);
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            int idx = g.index(i, j);
            if (!window.contains_index(idx)) continue;
            double dx = g.cell_cx(i) - cx, dy = g.cell_cy(j) - cy;
            s[idx] = height * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
    }
    return CompactFunc(g, std::move(s));
}

double CompactFunc::at(double x, double y) const {
    if (!grid_.contains(x, y)) throw OutOfDomain("CompactFunc::at: point outside grid");
    // Bilinear between the four nearest cell centers, clamped at the frame.
    double fx = (x - grid_.x0) / grid_.hx() - 0.5;
    double fy = (y - grid_.y0) / grid_.hy() - 0.5;
    int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
    double tx = fx - i0, ty = fy - j0;
    auto clampi = [&](int v) { return v < 0 ? 0 : (v >= grid_.n ? grid_.n - 1 : v); };
    int i1 = clampi(i0 + 1), j1 = clampi(j0 + 1);
    i0 = clampi(i0);
    j0 = clampi(j0);
    double a = samples_[grid_.index(i0, j0)], b = samples_[grid_.index(i1, j0)];
    double c = samples_[grid_.index(i0, j1)], d = samples_[grid_.index(i1, j1)];
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

double CompactFunc::lipschitz() const {
    double m = 0.0;
    int n = grid_.n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double v = samples_[grid_.index(i, j)];
            if (i + 1 < n) m = std::max(m, std::fabs(samples_[grid_.index(i + 1, j)] - v) / grid_.hx());
            if (j + 1 < n) m = std::max(m, std::fabs(samples_[grid_.index(i, j + 1)] - v) / grid_.hy());
        }
    }
    return m;
}

CompactFunc CompactFunc::add(const CompactFunc& o) const {
    require_same_grid(grid_, o.grid_, "function sum");
    std::vector<double> s(samples_);
    for (size_t k = 0; k < s.size(); ++k) s[k] += o.samples_[k];
    return CompactFunc(grid_, std::move(s));
}

CompactFunc CompactFunc::scaled(double a) const {
    std::vector<double> s(samples_);
    for (double& v : s) v *= a;
    return CompactFunc(grid_, std::move(s));
}

CompactFunc CompactFunc::multiply(const CompactFunc& o) const {
    require_same_grid(grid_, o.grid_, "function product");
    std::vector<double> s(samples_);
    for (size_t k = 0; k < s.size(); ++k) s[k] *= o.samples_[k];
    return CompactFunc(grid_, std::move(s));
}

CompactFunc CompactFunc::positive_part() const {
    std::vector<double> s(samples_);
    for (double& v : s) v = v > 0.0 ? v : 0.0;
    return CompactFunc(grid_, std::move(s));
}

CompactFunc CompactFunc::negative_part() const {
    std::vector<double> s(samples_);
    for (double& v : s) v = v < 0.0 ? -v : 0.0;
    return CompactFunc(grid_, std::move(s));
}

Region CompactFunc::superlevel(double t) const {
    Bitmask m(grid_.cells());
    for (int idx = 0; idx < grid_.cells(); ++idx)
        if (samples_[idx] > t) m.set(idx);
    return Region(grid_, RegionKind::Open, m);
}

PhiCurve::PhiCurve(std::vector<double> s, std::vector<double> v)
    : s_(std::move(s)), v_(std::move(v)) {
    if (s_.size() != v_.size() || s_.size() < 2)
        throw std::invalid_argument("PhiCurve: need matching knot/value lists, length >= 2");
    for (size_t k = 1; k < s_.size(); ++k)
        if (!(s_[k - 1] < s_[k])) throw std::invalid_argument("PhiCurve: knots must increase");
    if (s_.front() > 0.0 || s_.back() < 0.0)
        throw std::invalid_argument("PhiCurve: domain must contain 0");
    // phi(0) = 0 is a hard invariant: generators must fix the origin.
    double at0 = (*this)(0.0);
    if (at0 != 0.0) throw std::invalid_argument("PhiCurve: phi(0) must be 0");
}

PhiCurve PhiCurve::identity(double lo, double hi) {
    return PhiCurve({lo, hi}, {lo, hi});
}

PhiCurve PhiCurve::scaled_identity(double a, double lo, double hi) {
    return PhiCurve({lo, hi}, {a * lo, a * hi});
}

double PhiCurve::operator()(double s) const {
    if (s < s_.front() || s > s_.back())
        throw DomainMismatch("PhiCurve: argument outside domain");
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    size_t hi = it == s_.end() ? s_.size() - 1 : static_cast<size_t>(it - s_.begin());
    if (hi == 0) hi = 1;
    size_t lo = hi - 1;
    if (s == s_[lo]) return v_[lo];
    double t = (s - s_[lo]) / (s_[hi] - s_[lo]);
    return v_[lo] + t * (v_[hi] - v_[lo]);
}

PhiCurve PhiCurve::add(const PhiCurve& o) const {
    double lo = std::max(s_.front(), o.s_.front());
    double hi = std::min(s_.back(), o.s_.back());
    if (!(lo < hi)) throw DomainMismatch("PhiCurve::add: domains do not overlap");
    std::vector<double> knots;
    for (double s : s_)
        if (s >= lo && s <= hi) knots.push_back(s);
    for (double s : o.s_)
        if (s >= lo && s <= hi) knots.push_back(s);
    knots.push_back(lo);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> vals;
    vals.reserve(knots.size());
    for (double s : knots) vals.push_back((*this)(s) + o(s));
    return PhiCurve(std::move(knots), std::move(vals));
}

PhiCurve PhiCurve::scaled(double a) const {
    std::vector<double> v(v_);
    for (double& x : v) x *= a;
    return PhiCurve(s_, std::move(v));
}

PhiCurve PhiCurve::compose_with(const PhiCurve& o) const {
    // Knots of this∘o: o's knots plus points where o crosses a knot of this.
    std::vector<double> knots(o.s_);
    for (size_t seg = 0; seg + 1 < o.s_.size(); ++seg) {
        double sa = o.s_[seg], sb = o.s_[seg + 1];
        double va = o.v_[seg], vb = o.v_[seg + 1];
        if (va == vb) continue;
        for (double c : s_) {
            double t = (c - va) / (vb - va);
            if (t > 0.0 && t < 1.0) knots.push_back(sa + t * (sb - sa));
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> vals;
    vals.reserve(knots.size());
    for (double s : knots) vals.push_back((*this)(o(s)));
    return PhiCurve(std::move(knots), std::move(vals));
}

CompactFunc compose(const PhiCurve& phi, const CompactFunc& f) {
    double lo = f.min_sample(), hi = f.max_sample();
    if (!f.support().is_full()) {
        lo = std::min(lo, 0.0);
        hi = std::max(hi, 0.0);
    }
    if (lo < phi.domain_lo() || hi > phi.domain_hi())
        throw DomainMismatch("compose: function range leaves the curve domain");
    std::vector<double> s(f.samples());
    for (double& v : s) v = phi(v);
    return CompactFunc::from_samples(f.grid(), std::move(s));
}

}  // namespace qmeas
