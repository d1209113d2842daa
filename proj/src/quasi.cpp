#include "qmeas/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmeas/errors.hpp"
#include "qmeas/gen.hpp"

namespace qmeas {

namespace {

// FP-noise floor.  Exact routes (point mass, two-valued jump) only accumulate
// rounding error; ladder routes add their quantization budget separately.
double noise_floor(const TopMeasure& mu) {
    bool exact = mu.as_point_mass().has_value() || mu.two_valued().has_value();
    return (exact ? 1e-12 : 1e-9) * (1.0 + mu.total());
}

std::vector<double> sorted_distinct_samples(const CompactFunc& f) {
    std::vector<double> v = f.samples();
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// t -> mu({f > t}).  Density measures are answered by one sort of the samples
// plus suffix mass sums (the suffix array is exactly antitone, so atom masses
// never go negative); anything else evaluates the superlevel region.
class SuperlevelEval {
  public:
    SuperlevelEval(const TopMeasure& mu, const CompactFunc& f) : mu_(&mu), f_(&f) {
        if (auto dens = mu.as_density()) {
            const std::vector<double>& s = f.samples();
            std::vector<int> order(s.size());
            for (int i = 0; i < static_cast<int>(s.size()); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&s](int a, int b) { return s[a] < s[b]; });
            sorted_.reserve(s.size());
            for (int i : order) sorted_.push_back(s[i]);
            suffix_.assign(s.size() + 1, 0.0);
            for (int k = static_cast<int>(s.size()) - 1; k >= 0; --k)
                suffix_[k] = suffix_[k + 1] + (*dens)[order[k]];
        }
    }

    double operator()(double t) const {
        if (!suffix_.empty()) {
            auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
            return suffix_[it - sorted_.begin()];
        }
        return mu_->eval_superlevel(f_->superlevel(t));
    }

  private:
    const TopMeasure* mu_;
    const CompactFunc* f_;
    std::vector<double> sorted_;
    std::vector<double> suffix_;
};

// Jump location of F for a two-valued measure: the smallest sample value v
// with mu({f > v}) = 0.  F is antitone with values in {0, c}, so a binary
// search over the sorted distinct samples finds it; the quasi-integral is
// then c times this value.
double jump_location(const TopMeasure& mu, const CompactFunc& f, double c) {
    std::vector<double> v = sorted_distinct_samples(f);
    auto dead = [&](double t) { return mu.eval_superlevel(f.superlevel(t)) < 0.5 * c; };
    if (dead(v.front())) return v.front();
    int lo = 0, hi = static_cast<int>(v.size()) - 1;
    // {f > max} is empty, so dead(v[hi]) holds; dead(v[lo]) does not.
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (dead(v[mid]) ? hi : lo) = mid;
    }
    return v[hi];
}

struct LadderSpec {
    std::vector<double> t;
    double w = 0.0, lo = 0.0, hi = 0.0;
};

// Thresholds t_j = lo + (j-1) w for j = 0..K with w = (hi-lo)/(K-2), so the
// ladder overshoots the range by one bin on each side and t_{K-1} lands on
// the maximum exactly.  An interior threshold that collides with a sample
// value would read that plateau's mass on the wrong side of its own level;
// it is pushed up half a bin instead.
LadderSpec make_ladder(const CompactFunc& f, int K) {
    LadderSpec L;
    L.lo = f.min_sample();
    L.hi = f.max_sample();
    double w = (L.hi - L.lo) / (K - 2);
    if (!(w > 0.0)) w = 1e-9 * std::max(1.0, std::abs(L.lo));
    L.w = w;
    std::vector<double> uniq = sorted_distinct_samples(f);
    L.t.resize(K + 1);
    for (int j = 0; j <= K; ++j) {
        double tj = (j == K - 1) ? L.hi : L.lo + (j - 1) * w;
        if (j >= 2 && j <= K - 2 && std::binary_search(uniq.begin(), uniq.end(), tj))
            tj += 0.5 * w;
        L.t[j] = tj;
    }
    return L;
}

double atom_sum(const StieltjesAtoms& a) {
    double acc = 0.0;
    for (const StieltjesAtom& atom : a.atoms) acc += atom.location * atom.mass;
    return acc;
}

std::string gap_detail(double gap, double bound) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "gap=%.6g bound=%.6g", gap, bound);
    return buf;
}

}  // namespace

double StieltjesAtoms::total_mass() const {
    double acc = 0.0;
    for (const StieltjesAtom& atom : atoms) acc += atom.mass;
    return acc;
}

QuasiFunctional::QuasiFunctional(TopMeasure mu, int thresholds)
    : mu_(std::move(mu)), k_(thresholds) {
    if (k_ < 8) throw std::invalid_argument("QuasiFunctional: needs at least 8 thresholds");
}

double QuasiFunctional::distribution_at(const CompactFunc& f, double t) const {
    require_same_grid(grid(), f.grid(), "distribution_at");
    return mu_.eval_superlevel(f.superlevel(t));
}

DistributionFn QuasiFunctional::distribution(const CompactFunc& f) const {
    require_same_grid(grid(), f.grid(), "distribution");
    LadderSpec L = make_ladder(f, k_);
    DistributionFn d;
    d.bin_width = L.w;
    d.thresholds = std::move(L.t);
    d.values.resize(d.thresholds.size());
    if (auto pm = mu_.as_point_mass()) {
        double fx = f.at_index(grid().cell_of(pm->location.x, pm->location.y));
        for (std::size_t j = 0; j < d.thresholds.size(); ++j)
            d.values[j] = fx > d.thresholds[j] ? pm->weight : 0.0;
        return d;
    }
    if (auto c = mu_.two_valued()) {
        double tau = jump_location(mu_, f, *c);
        for (std::size_t j = 0; j < d.thresholds.size(); ++j)
            d.values[j] = d.thresholds[j] < tau ? *c : 0.0;
        return d;
    }
    SuperlevelEval F(mu_, f);
    for (std::size_t j = 0; j < d.thresholds.size(); ++j) d.values[j] = F(d.thresholds[j]);
    return d;
}

StieltjesAtoms QuasiFunctional::atoms(const CompactFunc& f) const {
    // Point-mass and two-valued measures push forward to a single atom whose
    // location is known exactly, so the ladder quantization is skipped.  This
    // keeps integrate_generator consistent with the exact quasi_integral
    // paths and with the near-zero ladder_error reported for these measures.
    if (auto pm = mu_.as_point_mass()) {
        StieltjesAtoms out;
        out.bin_width = 0.0;
        double fx = f.at_index(grid().cell_of(pm->location.x, pm->location.y));
        if (pm->weight > 0.0 && fx != 0.0) out.atoms.push_back({fx, pm->weight});
        return out;
    }
    if (auto c = mu_.two_valued()) {
        StieltjesAtoms out;
        out.bin_width = 0.0;
        double tau = jump_location(mu_, f, *c);
        if (*c > 0.0 && tau != 0.0) out.atoms.push_back({tau, *c});
        return out;
    }
    DistributionFn d = distribution(f);
    StieltjesAtoms out;
    out.bin_width = d.bin_width;
    double floor = -1e-9 * (1.0 + mu_.total());
    int K = static_cast<int>(d.thresholds.size()) - 1;
    for (int j = 1; j <= K; ++j) {
        double mass = d.values[j - 1] - d.values[j];
        if (mass < floor) throw std::logic_error("atoms: distribution function is not antitone");
        if (mass <= 0.0) continue;
        // Bin 1 holds exactly the minimum-level mass, so it is located on the
        // minimum itself; this keeps nonnegative inputs at nonnegative atoms.
        double loc = (j == 1) ? d.thresholds[1]
                              : 0.5 * (d.thresholds[j - 1] + d.thresholds[j]);
        out.atoms.push_back({loc, mass});
    }
    return out;
}

double QuasiFunctional::nonneg_integral(const CompactFunc& f) const { return atom_sum(atoms(f)); }

double QuasiFunctional::two_sided_ladder(const CompactFunc& f) const { return atom_sum(atoms(f)); }

double QuasiFunctional::quasi_integral(const CompactFunc& f) const {
    require_same_grid(grid(), f.grid(), "quasi_integral");
    if (f.sup_norm() == 0.0) return 0.0;
    if (auto pm = mu_.as_point_mass())
        return pm->weight * f.at_index(grid().cell_of(pm->location.x, pm->location.y));
    if (auto c = mu_.two_valued()) {
        double primary = *c * jump_location(mu_, f, *c);
        if (!f.nonnegative()) {
            double cross = *c * jump_location(mu_, f.positive_part(), *c) -
                           *c * jump_location(mu_, f.negative_part(), *c);
            if (std::abs(primary - cross) > 1e-12 * (1.0 + *c * f.sup_norm()))
                throw std::logic_error("quasi_integral: two-valued split disagreement");
        }
        return primary;
    }
    if (f.nonnegative()) return nonneg_integral(f);
    double primary = nonneg_integral(f.positive_part()) - nonneg_integral(f.negative_part());
    double cross = two_sided_ladder(f);
    if (std::abs(primary - cross) > tolerance_for(f))
        throw std::logic_error("quasi_integral: split disagrees with the two-sided ladder");
    return primary;
}

double QuasiFunctional::integrate_generator(const CompactFunc& f, const PhiCurve& phi) const {
    require_same_grid(grid(), f.grid(), "integrate_generator");
    if (f.min_sample() < phi.domain_lo() || f.max_sample() > phi.domain_hi())
        throw DomainMismatch("integrate_generator: sample range leaves the curve domain");
    double acc = 0.0;
    for (const StieltjesAtom& a : atoms(f).atoms) acc += phi(a.location) * a.mass;
    return acc;
}

double QuasiFunctional::qi2_residual(const CompactFunc& f, const PhiCurve& phi,
                                     const PhiCurve& psi) const {
    double both = quasi_integral(compose(phi.add(psi), f));
    double split = quasi_integral(compose(phi, f)) + quasi_integral(compose(psi, f));
    return std::abs(both - split);
}

double QuasiFunctional::recover_open(const Region& u, int plateau_ladder) const {
    require_same_grid(grid(), u.grid(), "recover_open");
    double best = 0.0;
    for (int j = plateau_ladder; j >= 1; --j) {
        Region core = u.erode(j).with_kind(RegionKind::Compact);
        if (!core.mask().any()) continue;
        // Support is dilate(core, j-1), one cell short of the erosion depth,
        // so it stays inside u.
        best = std::max(best, quasi_integral(CompactFunc::plateau(grid(), core, j - 1, 1.0)));
    }
    return best;
}

double QuasiFunctional::recover_compact(const Region& k, int plateau_ladder) const {
    require_same_grid(grid(), k.grid(), "recover_compact");
    if (!k.mask().any()) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = plateau_ladder; j >= 1; --j)
        best = std::min(best, quasi_integral(CompactFunc::plateau(grid(), k, j, 1.0)));
    return best;
}

double QuasiFunctional::tolerance_for(const CompactFunc& f) const {
    return 5.0 * (f.sup_norm() / k_ + f.lipschitz() * grid().h()) * mu_.total();
}

double QuasiFunctional::ladder_error(const CompactFunc& f) const {
    double noise = noise_floor(mu_);
    if (mu_.as_point_mass() || mu_.two_valued()) return noise;
    double range = f.max_sample() - f.min_sample();
    return range / (k_ - 2) * mu_.total() + noise;
}

namespace {

std::optional<std::pair<CompactFunc, CompactFunc>> unit_pair_from(const QuasiFunctional& q,
                                                                  const Region& a,
                                                                  const Region& b) {
    CompactFunc f = CompactFunc::plateau(q.grid(), a, 1, 1.0);
    CompactFunc g = CompactFunc::plateau(q.grid(), b, 1, 1.0);
    if (f.support().intersects(g.support())) return std::nullopt;
    double rf = q.quasi_integral(f), rg = q.quasi_integral(g);
    if (rf <= 0.0 || rg <= 0.0) return std::nullopt;
    f = f.scaled(1.0 / rf);
    g = g.scaled(1.0 / rg);
    // Scaling commutes with the ladder only up to quantization; a second
    // pass lands within a bin of 1.
    rf = q.quasi_integral(f);
    rg = q.quasi_integral(g);
    return std::make_pair(f.scaled(1.0 / rf), g.scaled(1.0 / rg));
}

}  // namespace

std::pair<CompactFunc, CompactFunc> disjoint_unit_pair(const QuasiFunctional& q, uint64_t seed) {
    const TopMeasure& mu = q.measure();
    if (mu.two_valued())
        throw NotEnoughValues("disjoint_unit_pair: the measure takes only two values");
    // Left and right halves carry the largest mass of any separated pair, so
    // their scaled plateaus have the smallest sup norm and the tightest
    // downstream ladder error.  Random separated pairs are the fallback for
    // measures that vanish on a half.
    const Grid& g = q.grid();
    auto halves = unit_pair_from(
        q, Region::rectangle(g, RegionKind::Compact, 0.02, 0.02, 0.48, 0.98),
        Region::rectangle(g, RegionKind::Compact, 0.52, 0.02, 0.98, 0.98));
    if (halves) return *halves;
    Gen gen(g, seed, mu.special_points());
    for (int attempt = 0; attempt < 60; ++attempt) {
        auto cores = gen.separated_pair(RegionKind::Compact);
        auto pair = unit_pair_from(q, cores.first, cores.second);
        if (pair) return *pair;
    }
    throw NotEnoughValues("disjoint_unit_pair: no separated pair carries positive mass");
}

namespace {

double curve_slope(const PhiCurve& phi) {
    const std::vector<double>& s = phi.knots();
    const std::vector<double>& v = phi.values();
    double m = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        m = std::max(m, std::abs(v[i] - v[i - 1]) / (s[i] - s[i - 1]));
    return m;
}

// Height-1 tent peaked at `center`, feet a quarter of the range away.  A
// unit-total functional with its mass at rho(f) maps it to 1 exactly, while
// any spread-out distribution averages the tent well below its peak.  When
// the peak sits too close to 0 for the curve to vanish there, fall back to
// the quadratic, whose convexity gap serves the same purpose.
PhiCurve peaked_curve(double lo, double hi, double center) {
    double span = std::max(hi - lo, 1e-6);
    double dlo = std::min(lo, 0.0) - 0.15 * span;
    double dhi = std::max(hi, 0.0) + 0.15 * span;
    double q = 0.25 * span;
    if (std::abs(center) > 1.1 * q) {
        return PhiCurve::sample(
            [center, q](double s) {
                double d = std::abs(s - center);
                return d >= q ? 0.0 : 1.0 - d / q;
            },
            dlo, dhi, 96);
    }
    return PhiCurve::sample([](double s) { return s * s; }, dlo, dhi, 96);
}

}  // namespace

Verdict simplicity_verdict(const QuasiFunctional& q, int trials, uint64_t seed) {
    const TopMeasure& mu = q.measure();
    double noise = 1e-9 * (1.0 + mu.total());
    bool exact = mu.as_point_mass().has_value() || mu.two_valued().has_value();
    Gen gen(q.grid(), seed, mu.special_points());
    double tol_seen = noise;
    for (int trial = 0; trial < trials; ++trial) {
        CompactFunc f = (trial == 0) ? CompactFunc::coordinate_x(q.grid())
                                     : gen.nonneg_func(3, 5);
        double rf = q.quasi_integral(f);

        // Condition 1: the atoms concentrate within two bins of rho(f).
        StieltjesAtoms a = q.atoms(f);
        double outside = 0.0;
        for (const StieltjesAtom& atom : a.atoms)
            if (std::abs(atom.location - rf) > 2.0 * a.bin_width) outside += atom.mass;
        if (outside > noise)
            return Verdict::fail("not-simple", outside, noise,
                                 Witness{"atom mass away from rho(f)",
                                         {{"rho(f)", rf}, {"outside-mass", outside}},
                                         seed, trial});

        double lo = std::min(f.min_sample(), rf), hi = std::max(f.max_sample(), rf);
        PhiCurve phi = (trial == 0) ? peaked_curve(lo, hi, rf) : gen.phi(lo, hi);
        PhiCurve psi = (trial == 0) ? PhiCurve::identity(std::min(lo, 0.0) - 1.0,
                                                         std::max(hi, 0.0) + 1.0)
                                    : gen.phi(lo, hi);

        // Condition 2: rho(phi o f) = phi(rho(f)).
        CompactFunc pf = compose(phi, f);
        double lhs = q.quasi_integral(pf), rhs = phi(rf);
        double tol2 = exact ? noise
                            : q.ladder_error(pf) + curve_slope(phi) * q.ladder_error(f) + noise;
        if (std::abs(lhs - rhs) > tol2)
            return Verdict::fail("not-simple", std::abs(lhs - rhs), tol2,
                                 Witness{"rho(phi o f) differs from phi(rho(f))",
                                         {{"rho(f)", rf},
                                          {"rho(phi o f)", lhs},
                                          {"phi(rho(f))", rhs}},
                                         seed, trial});

        // Condition 3: rho((phi psi) o f) = rho(phi o f) rho(psi o f).
        CompactFunc qf = compose(psi, f);
        CompactFunc prod = pf.multiply(qf);
        double both = q.quasi_integral(prod);
        double rq = q.quasi_integral(qf);
        double split = lhs * rq;
        double tol3 = exact ? noise
                            : q.ladder_error(prod) + std::abs(lhs) * q.ladder_error(qf) +
                                  std::abs(rq) * q.ladder_error(pf) + noise;
        if (std::abs(both - split) > tol3)
            return Verdict::fail("not-simple", std::abs(both - split), tol3,
                                 Witness{"rho((phi psi) o f) differs from the product",
                                         {{"rho((phi psi) o f)", both},
                                          {"rho(phi o f)", lhs},
                                          {"rho(psi o f)", rq}},
                                         seed, trial});
        tol_seen = std::max({tol_seen, tol2, tol3});
    }
    return Verdict::ok("simple", tol_seen);
}

Verdict almost_simple_verdict(const QuasiFunctional& q, int trials, uint64_t seed) {
    const TopMeasure& mu = q.measure();
    const Grid& g = q.grid();
    double noise = 1e-9 * (1.0 + mu.total());
    bool exact = mu.as_point_mass().has_value() || mu.two_valued().has_value();
    Gen gen(g, seed, mu.special_points());
    double tol_seen = noise;
    for (int trial = 0; trial < trials; ++trial) {
        CompactFunc f = CompactFunc::zero(g), h = CompactFunc::zero(g);
        if (trial == 0) {
            // Two wide blocks on opposite sides: any functional with positive
            // mass on both fails immediately.
            Point a0 = g.at_fraction(0.08, 0.15), a1 = g.at_fraction(0.40, 0.85);
            Point b0 = g.at_fraction(0.60, 0.15), b1 = g.at_fraction(0.92, 0.85);
            f = CompactFunc::plateau(g, Region::rectangle(g, RegionKind::Compact, a0.x, a0.y, a1.x, a1.y), 2, 1.0);
            h = CompactFunc::plateau(g, Region::rectangle(g, RegionKind::Compact, b0.x, b0.y, b1.x, b1.y), 2, 1.0);
        } else {
            auto pair = gen.disjoint_support_pair(trial % 2 == 1);
            f = pair.first;
            h = pair.second;
        }
        double rf = q.quasi_integral(f), rh = q.quasi_integral(h);
        double residual = std::abs(rf * rh);
        double tol = exact ? noise
                           : q.ladder_error(f) * std::abs(rh) + q.ladder_error(h) * std::abs(rf) +
                                 q.ladder_error(f) * q.ladder_error(h) + noise;
        if (residual > tol)
            return Verdict::fail("not-almost-simple", residual, tol,
                                 Witness{"disjointly supported pair with rho(f) rho(g) != 0",
                                         {{"rho(f)", rf}, {"rho(g)", rh}},
                                         seed, trial});
        tol_seen = std::max(tol_seen, tol);
    }
    return Verdict::ok("almost-simple", tol_seen);
}

Verdict continuity_check(const QuasiFunctional& q, const CompactFunc& f, const CompactFunc& g) {
    const TopMeasure& mu = q.measure();
    require_same_grid(q.grid(), f.grid(), "continuity_check");
    require_same_grid(q.grid(), g.grid(), "continuity_check");
    double d = f.add(g.scaled(-1.0)).sup_norm();
    Region hull = f.support().unite(g.support());
    double mu_hull = hull.mask().any() ? mu.eval_superlevel(hull) : 0.0;
    double noise = 1e-9 * (1.0 + mu.total()) * (1.0 + d);

    double rf, rg, slack;
    if (mu.as_point_mass() || mu.two_valued()) {
        rf = q.quasi_integral(f);
        rg = q.quasi_integral(g);
        slack = noise;
    } else {
        // One shared plain midpoint ladder for both distribution functions.
        // Summation by parts turns the gap into sum_j w (F_f - F_g)(t_j);
        // each threshold window carries at most the mass it covers, so the
        // gap obeys the factor-1 bound with a single bin of slack.
        double lo = std::min(f.min_sample(), g.min_sample());
        double hi = std::max(f.max_sample(), g.max_sample());
        int K = q.thresholds();
        double w = (hi - lo) / (K - 2);
        if (!(w > 0.0)) w = 1e-9 * std::max(1.0, std::abs(lo));
        SuperlevelEval Ff(mu, f), Fg(mu, g);
        rf = rg = 0.0;
        double pf = 0.0, pg = 0.0;
        for (int j = 0; j <= K; ++j) {
            double t = lo + (j - 1) * w;
            double vf = Ff(t), vg = Fg(t);
            if (j > 0) {
                double mid = t - 0.5 * w;
                rf += mid * (pf - vf);
                rg += mid * (pg - vg);
            }
            pf = vf;
            pg = vg;
        }
        slack = w * mu_hull + noise;
    }

    double gap = std::abs(rf - rg);
    Witness w_{"rho gap against ||f-g|| mu(K)",
               {{"rho(f)", rf}, {"rho(g)", rg}, {"||f-g||", d}, {"mu(K)", mu_hull}},
               0, -1};
    double bound2 = 2.0 * d * mu_hull + slack;
    if (gap > bound2) return Verdict::fail("continuity-violated", gap, bound2, w_);
    if (f.nonnegative() && g.nonnegative()) {
        double bound1 = d * mu_hull + slack;
        if (gap > bound1) return Verdict::fail("continuity-violated", gap, bound1, w_);
    }
    return Verdict::ok("continuity-holds", bound2, gap_detail(gap, bound2));
}

}  // namespace qmeas
