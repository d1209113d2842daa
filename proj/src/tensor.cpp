#include "qmeas/tensor.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "qmeas/errors.hpp"

namespace qmeas {

ProductRegion ProductRegion::product(Region rx, Region sy) {
    if (rx.kind() != sy.kind())
        throw std::invalid_argument("product region: factors must share the kind");
    ProductRegion a(rx.grid(), sy.grid(), rx.kind());
    if (rx.mask().any() && sy.mask().any()) a.terms_.push_back({std::move(rx), std::move(sy)});
    return a;
}

ProductRegion ProductRegion::empty(const Grid& gx, const Grid& gy, RegionKind kind) {
    return ProductRegion(gx, gy, kind);
}

ProductRegion ProductRegion::full(const Grid& gx, const Grid& gy, RegionKind kind) {
    return product(Region::full(gx, kind), Region::full(gy, kind));
}

ProductRegion ProductRegion::unite(const ProductRegion& o) const {
    require_same_grid(gx_, o.gx_, "product region union (X)");
    require_same_grid(gy_, o.gy_, "product region union (Y)");
    if (kind_ != o.kind_) throw std::invalid_argument("product region union: kinds differ");
    ProductRegion a(gx_, gy_, kind_);
    a.terms_ = terms_;
    a.terms_.insert(a.terms_.end(), o.terms_.begin(), o.terms_.end());
    return a;
}

ProductRegion ProductRegion::complement() const {
    // not(union_i R_i x S_i) = intersect_i (cR_i x Y  union  X x cS_i),
    // expanded distributively into product terms of the opposite kind.
    RegionKind ck = opposite(kind_);
    std::vector<ProductTerm> acc;
    acc.push_back({Region::full(gx_, ck), Region::full(gy_, ck)});
    for (const ProductTerm& t : terms_) {
        Region crx = t.rx.complement();
        Region csy = t.sy.complement();
        std::vector<ProductTerm> next;
        for (const ProductTerm& a : acc) {
            Region r1 = a.rx.intersect(crx);
            if (r1.mask().any()) next.push_back({r1, a.sy});
            Region s2 = a.sy.intersect(csy);
            if (s2.mask().any()) next.push_back({a.rx, s2});
        }
        if (next.size() > 64)
            throw std::length_error("product region complement: term expansion exceeds 64");
        acc = std::move(next);
    }
    ProductRegion out(gx_, gy_, ck);
    out.terms_ = std::move(acc);
    return out;
}

Region ProductRegion::section_at_y(const Point& y) const {
    if (!gy_.contains(y.x, y.y)) throw OutOfDomain("section_at_y: point outside the Y rectangle");
    Bitmask acc(gx_.cells());
    for (const ProductTerm& t : terms_)
        if (t.sy.contains_point(y)) acc = acc | t.rx.mask();
    return Region(gx_, kind_, acc);
}

Region ProductRegion::section_at_x(const Point& x) const {
    if (!gx_.contains(x.x, x.y)) throw OutOfDomain("section_at_x: point outside the X rectangle");
    Bitmask acc(gy_.cells());
    for (const ProductTerm& t : terms_)
        if (t.rx.contains_point(x)) acc = acc | t.sy.mask();
    return Region(gy_, kind_, acc);
}

bool ProductRegion::contains(const Point& px, const Point& py) const {
    for (const ProductTerm& t : terms_)
        if (t.rx.contains_point(px) && t.sy.contains_point(py)) return true;
    return false;
}

std::string ProductRegion::describe() const {
    return std::string(kind_name(kind_)) + " product region, " + std::to_string(terms_.size()) +
           " term(s)";
}

SectionProfile::SectionProfile(const ProductRegion& a) : gy_(a.grid_y()) {
    const auto& terms = a.terms();
    if (terms.size() > 64) throw std::length_error("section profile: more than 64 terms");
    std::map<uint64_t, Bitmask> buckets;
    for (int idx = 0; idx < gy_.cells(); ++idx) {
        uint64_t key = 0;
        for (size_t i = 0; i < terms.size(); ++i)
            if (terms[i].sy.contains_index(idx)) key |= (uint64_t(1) << i);
        auto it = buckets.find(key);
        if (it == buckets.end()) it = buckets.emplace(key, Bitmask(gy_.cells())).first;
        it->second.set(idx);
    }
    const Grid& gx = a.grid_x();
    for (auto& [key, cells] : buckets) {
        Bitmask section_mask(gx.cells());
        for (size_t i = 0; i < terms.size(); ++i)
            if (key & (uint64_t(1) << i)) section_mask = section_mask | terms[i].rx.mask();
        classes_.push_back(Class{key, cells, Region(gx, a.kind(), section_mask)});
    }
}

TensorFunc TensorFunc::zero(const Grid& gx, const Grid& gy) { return TensorFunc(gx, gy); }

TensorFunc TensorFunc::tensor(CompactFunc g, CompactFunc h) {
    TensorFunc f(g.grid(), h.grid());
    if (g.sup_norm() > 0.0 && h.sup_norm() > 0.0) f.terms_.push_back({std::move(g), std::move(h)});
    return f;
}

TensorFunc TensorFunc::add(const TensorFunc& o) const {
    require_same_grid(gx_, o.gx_, "tensor sum (X)");
    require_same_grid(gy_, o.gy_, "tensor sum (Y)");
    TensorFunc f(gx_, gy_);
    f.terms_ = terms_;
    f.terms_.insert(f.terms_.end(), o.terms_.begin(), o.terms_.end());
    return f;
}

TensorFunc TensorFunc::scaled(double a) const {
    TensorFunc f(gx_, gy_);
    if (a != 0.0)
        for (const Term& t : terms_) f.terms_.push_back({t.g.scaled(a), t.h});
    return f;
}

TensorFunc TensorFunc::multiply(const TensorFunc& o) const {
    require_same_grid(gx_, o.gx_, "tensor product (X)");
    require_same_grid(gy_, o.gy_, "tensor product (Y)");
    TensorFunc f(gx_, gy_);
    for (const Term& a : terms_)
        for (const Term& b : o.terms_) f.terms_.push_back({a.g.multiply(b.g), a.h.multiply(b.h)});
    return f;
}

double TensorFunc::at(const Point& px, const Point& py) const {
    double s = 0.0;
    for (const Term& t : terms_) s += t.g.at(px.x, px.y) * t.h.at(py.x, py.y);
    return s;
}

CompactFunc TensorFunc::section_at_y(const Point& y) const {
    if (!gy_.contains(y.x, y.y))
        throw OutOfDomain("tensor section_at_y: point outside the Y rectangle");
    return combine_x(y_coefficients(gy_.cell_of(y.x, y.y)));
}

CompactFunc TensorFunc::section_at_x(const Point& x) const {
    if (!gx_.contains(x.x, x.y))
        throw OutOfDomain("tensor section_at_x: point outside the X rectangle");
    return combine_y(x_coefficients(gx_.cell_of(x.x, x.y)));
}

std::vector<double> TensorFunc::y_coefficients(int y_cell) const {
    std::vector<double> c;
    c.reserve(terms_.size());
    for (const Term& t : terms_) c.push_back(t.h.at_index(y_cell));
    return c;
}

std::vector<double> TensorFunc::x_coefficients(int x_cell) const {
    std::vector<double> c;
    c.reserve(terms_.size());
    for (const Term& t : terms_) c.push_back(t.g.at_index(x_cell));
    return c;
}

CompactFunc TensorFunc::combine_x(const std::vector<double>& c) const {
    CompactFunc s = CompactFunc::zero(gx_);
    for (size_t i = 0; i < terms_.size(); ++i)
        if (c[i] != 0.0) s = s.add(terms_[i].g.scaled(c[i]));
    return s;
}

CompactFunc TensorFunc::combine_y(const std::vector<double>& c) const {
    CompactFunc s = CompactFunc::zero(gy_);
    for (size_t i = 0; i < terms_.size(); ++i)
        if (c[i] != 0.0) s = s.add(terms_[i].h.scaled(c[i]));
    return s;
}

double TensorFunc::sup_norm_bound() const {
    double s = 0.0;
    for (const Term& t : terms_) s += t.g.sup_norm() * t.h.sup_norm();
    return s;
}

double TensorFunc::sup_norm_exact() const {
    double best = 0.0;
    for (int cy = 0; cy < gy_.cells(); ++cy) {
        std::vector<double> coef = y_coefficients(cy);
        for (int cx = 0; cx < gx_.cells(); ++cx) {
            double v = 0.0;
            for (size_t i = 0; i < terms_.size(); ++i) v += coef[i] * terms_[i].g.at_index(cx);
            best = std::max(best, std::fabs(v));
        }
    }
    return best;
}

}  // namespace qmeas
