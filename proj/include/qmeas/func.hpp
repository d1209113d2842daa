// Continuous test functions at grid scale.
//
// CompactFunc stores one sample per cell center and is read as the
// piecewise-bilinear interpolant of those samples.  The support is the
// Compact region of nonzero cells; samples are exactly 0 outside it.
//
// PhiCurve is a continuous piecewise-linear curve phi with phi(0) = 0, used
// as a generator transform: composing phi with a function keeps its support
// compact.  Curve addition and scaling are exact on merged breakpoints.
#pragma once

#include <optional>
#include <vector>

#include "qmeas/region.hpp"

namespace qmeas {

class CompactFunc {
  public:
    static CompactFunc zero(const Grid& g);
    static CompactFunc from_samples(const Grid& g, std::vector<double> samples);
    // height on `core`, linear Chebyshev ramp to 0 over `ramp_cells` cells.
    // The support is dilate(core, ramp_cells).
    static CompactFunc plateau(const Grid& g, const Region& core, int ramp_cells, double height);
    // f(x, y) = x - offset, sampled at cell centers (full support).
    static CompactFunc coordinate_x(const Grid& g, double offset = 0.0);
    static CompactFunc coordinate_y(const Grid& g, double offset = 0.0);
    // Gaussian bump restricted to a window region (0 outside it).
    static CompactFunc bump(const Grid& g, double cx, double cy, double sigma, double height,
                            const Region& window);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& samples() const { return samples_; }
    double at_cell(int i, int j) const { return samples_[grid_.index(i, j)]; }
    double at_index(int idx) const { return samples_[idx]; }
    // Piecewise-bilinear read at a real point.
    double at(double x, double y) const;

    const Region& support() const { return support_; }
    double sup_norm() const { return sup_norm_; }
    double min_sample() const { return min_; }
    double max_sample() const { return max_; }
    bool nonnegative() const { return min_ >= 0.0; }
    // Largest one-cell sample jump divided by cell size: grid-scale Lipschitz
    // constant, used in tolerance formulas.
    double lipschitz() const;

    CompactFunc add(const CompactFunc& o) const;
    CompactFunc scaled(double a) const;
    CompactFunc multiply(const CompactFunc& o) const;
    CompactFunc positive_part() const;
    CompactFunc negative_part() const;  // f = positive_part() - negative_part()

    // Open superlevel region {f > t}.
    Region superlevel(double t) const;

  private:
    CompactFunc(Grid g, std::vector<double> s);
    Grid grid_;
    std::vector<double> samples_;
    Region support_;
    double sup_norm_ = 0.0, min_ = 0.0, max_ = 0.0;
};

class PhiCurve {
  public:
    // Breakpoints must be strictly increasing in s and bracket 0; the curve
    // must pass through (0, 0) exactly.
    PhiCurve(std::vector<double> s, std::vector<double> v);

    static PhiCurve identity(double lo, double hi);
    static PhiCurve scaled_identity(double a, double lo, double hi);
    // Piecewise-linear approximation of s^2 (or any callable) on [lo, hi]
    // with `pieces` segments; passes through 0 exactly when lo <= 0 <= hi.
    template <typename F>
    static PhiCurve sample(F&& fn, double lo, double hi, int pieces);

    double domain_lo() const { return s_.front(); }
    double domain_hi() const { return s_.back(); }
    double operator()(double s) const;          // throws DomainMismatch outside the domain
    const std::vector<double>& knots() const { return s_; }
    const std::vector<double>& values() const { return v_; }

    PhiCurve add(const PhiCurve& o) const;      // exact on merged knots
    PhiCurve scaled(double a) const;
    // this∘o, exact: knots are o's knots plus preimages of this's knots.
    PhiCurve compose_with(const PhiCurve& o) const;

  private:
    std::vector<double> s_, v_;
};

template <typename F>
PhiCurve PhiCurve::sample(F&& fn, double lo, double hi, int pieces) {
    std::vector<double> s, v;
    bool zero_in = lo <= 0.0 && hi >= 0.0;
    for (int k = 0; k <= pieces; ++k) {
        double t = lo + (hi - lo) * k / pieces;
        s.push_back(t);
    }
    if (zero_in) {
        bool has_zero = false;
        for (double t : s) has_zero |= (t == 0.0);
        if (!has_zero) {
            s.push_back(0.0);
            std::sort(s.begin(), s.end());
        }
    }
    for (double t : s) v.push_back(t == 0.0 ? 0.0 : fn(t));
    return PhiCurve(std::move(s), std::move(v));
}

// phi composed with f, cellwise: (phi ∘ f)(cell) = phi(f(cell)).  Requires the
// sample range of f (plus 0 if the support is not full) inside phi's domain.
CompactFunc compose(const PhiCurve& phi, const CompactFunc& f);

}  // namespace qmeas
