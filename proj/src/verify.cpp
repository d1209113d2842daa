#include "qmeas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qmeas/gen.hpp"
#include "qmeas/witness.hpp"

namespace qmeas {

namespace {

// Exact variants produce values by scaling {0, 1} decompositions; grid
// densities accumulate per-cell sums whose order differs between the two
// sides of an identity.
double noise_for(const TopMeasure& m) {
    double base = m.two_valued() || m.as_point_mass() ? 1e-12 : 1e-9;
    return base * (1.0 + m.total());
}

Witness pair_witness(const std::string& what, const Region& a, const Region& b, double ma,
                     double mb, double mu, uint64_t seed, int trial) {
    Witness w;
    w.description = what + "; A " + a.describe() + ", B " + b.describe();
    w.values = {{"mu(A)", ma}, {"mu(B)", mb}, {"mu(AuB)", mu}};
    w.seed = seed;
    w.trial = trial;
    return w;
}

}  // namespace

Verdict verify_tm_axioms(const TopMeasure& m, uint64_t seed, int trials) {
    const Grid& g = m.grid();
    Gen gen(g, seed, m.special_points());
    double noise = noise_for(m);
    double worst = 0.0;

    for (int trial = 0; trial < trials; ++trial) {
        for (RegionKind kind : {RegionKind::Compact, RegionKind::Open}) {
            // Additivity on a separated pair.
            auto [a, b] = gen.separated_pair(kind);
            double ma = m.eval(a), mb = m.eval(b), mu = m.eval(a.unite(b));
            double res = std::abs(mu - ma - mb);
            worst = std::max(worst, res);
            if (res > noise)
                return Verdict::fail("additivity-violated", res, noise,
                                     pair_witness("additivity on a disjoint pair", a, b, ma, mb,
                                                  mu, seed, trial));

            // Complement identity: the pair (A, X \ A) is a disjoint
            // mixed-kind partition of the whole space.
            double mc = m.eval(a.complement());
            res = std::abs(m.total() - ma - mc);
            worst = std::max(worst, res);
            if (res > noise) {
                Witness w;
                w.description = "complement identity; A " + a.describe();
                w.values = {{"mu(A)", ma}, {"mu(X\\A)", mc}, {"mu(X)", m.total()}};
                w.seed = seed;
                w.trial = trial;
                return Verdict::fail("complement-violated", res, noise, w);
            }
        }

        // Inner approximation: eroding an open region by j cells yields a
        // compact whose value climbs to mu(U) as j shrinks, with defect
        // exactly the mass of the open boundary collar.
        Region u = gen.region(RegionKind::Open);
        double mu_u = m.eval(u);
        double prev = -1.0;
        for (int j = Gen::ladder_depth; j >= 1; --j) {
            Region k = u.erode(j).with_kind(RegionKind::Compact);
            double mk = m.eval(k);
            if (mk < prev - noise || mk > mu_u + noise) {
                Witness w;
                w.description = "inner ladder not monotone; U " + u.describe();
                w.values = {{"mu(U)", mu_u}, {"mu(K_j)", mk}, {"j", double(j)}, {"prev", prev}};
                w.seed = seed;
                w.trial = trial;
                return Verdict::fail("inner-regularity-violated",
                                     std::max(prev - mk, mk - mu_u), noise, w);
            }
            prev = mk;
            if (j == 1) {
                double collar = m.eval(u.minus(k));
                double res = std::abs(mu_u - mk - collar);
                worst = std::max(worst, res);
                if (res > noise) {
                    Witness w;
                    w.description = "inner defect is not the collar mass; U " + u.describe();
                    w.values = {{"mu(U)", mu_u}, {"mu(K_1)", mk}, {"mu(collar)", collar}};
                    w.seed = seed;
                    w.trial = trial;
                    return Verdict::fail("inner-regularity-violated", res, noise, w);
                }
            }
        }

        // Outer approximation: dilating a compact region by j cells yields
        // an open whose value descends to mu(K).
        Region k = gen.region(RegionKind::Compact);
        double mu_k = m.eval(k);
        prev = std::numeric_limits<double>::infinity();
        for (int j = Gen::ladder_depth; j >= 1; --j) {
            Region uj = k.dilate(j).with_kind(RegionKind::Open);
            double mj = m.eval(uj);
            if (mj > prev + noise || mj < mu_k - noise) {
                Witness w;
                w.description = "outer ladder not monotone; K " + k.describe();
                w.values = {{"mu(K)", mu_k}, {"mu(U_j)", mj}, {"j", double(j)}, {"prev", prev}};
                w.seed = seed;
                w.trial = trial;
                return Verdict::fail("outer-regularity-violated",
                                     std::max(mj - prev, mu_k - mj), noise, w);
            }
            prev = mj;
            if (j == 1) {
                double collar = m.eval(uj.minus(k));
                double res = std::abs(mj - mu_k - collar);
                worst = std::max(worst, res);
                if (res > noise) {
                    Witness w;
                    w.description = "outer defect is not the collar mass; K " + k.describe();
                    w.values = {{"mu(K)", mu_k}, {"mu(U_1)", mj}, {"mu(collar)", collar}};
                    w.seed = seed;
                    w.trial = trial;
                    return Verdict::fail("outer-regularity-violated", res, noise, w);
                }
            }
        }
    }
    return Verdict::ok("tm-axioms-hold", noise,
                       "worst residual " + std::to_string(worst) + " over " +
                           std::to_string(trials) + " trials");
}

Verdict subadditivity_verdict(const TopMeasure& m, uint64_t seed, int trials) {
    const Grid& g = m.grid();
    double noise = noise_for(m);

    // Trial 0: the canonical overlapping corridor pair, when the measure has
    // one.  Random region pairs almost never exhibit the violation.
    for (RegionKind kind : {RegionKind::Open, RegionKind::Compact}) {
        auto pair = nonsubadditive_pair(m, kind);
        if (!pair) break;
        double ma = m.eval(pair->first), mb = m.eval(pair->second);
        double mu = m.eval(pair->first.unite(pair->second));
        double res = mu - ma - mb;
        if (res > noise)
            return Verdict::fail(
                "not-subadditive", res, noise,
                pair_witness("corridor pair", pair->first, pair->second, ma, mb, mu, seed, 0));
    }

    Gen gen(g, seed, m.special_points());
    double worst = 0.0;
    for (int trial = 1; trial <= trials; ++trial) {
        for (RegionKind kind : {RegionKind::Compact, RegionKind::Open}) {
            auto [a, b] = gen.pair(kind);
            double ma = m.eval(a), mb = m.eval(b), mu = m.eval(a.unite(b));
            double res = mu - ma - mb;
            worst = std::max(worst, res);
            if (res > noise)
                return Verdict::fail(
                    "not-subadditive", res, noise,
                    pair_witness("random pair", a, b, ma, mb, mu, seed, trial));
        }
    }
    return Verdict::ok("subadditive", noise,
                       "worst excess " + std::to_string(worst) + " over " +
                           std::to_string(trials) + " trials");
}

std::string Classification::name() const {
    switch (cls) {
        case MeasureClass::Simple: return "simple";
        case MeasureClass::AlmostSimple: return "almost-simple";
        case MeasureClass::Measure: return "measure";
        case MeasureClass::Other: return "other";
    }
    return "other";
}

Classification classify(const TopMeasure& m, uint64_t seed) {
    Gen gen(m.grid(), seed, m.special_points());
    double total = m.total();
    double tol = 1e-9 * (1.0 + total);

    std::vector<double> values{0.0, total};
    for (int trial = 0; trial < 10; ++trial)
        for (RegionKind kind : {RegionKind::Compact, RegionKind::Open})
            values.push_back(m.eval(gen.region(kind)));
    if (auto pair = nonsubadditive_pair(m, RegionKind::Open)) {
        values.push_back(m.eval(pair->first));
        values.push_back(m.eval(pair->first.unite(pair->second)));
    }

    bool two_valued = total > tol;
    for (double v : values)
        if (std::abs(v) > tol && std::abs(v - total) > tol) two_valued = false;

    Classification c;
    if (two_valued && std::abs(total - 1.0) <= tol) {
        c.cls = MeasureClass::Simple;
        c.scale = 1.0;
    } else if (two_valued) {
        c.cls = MeasureClass::AlmostSimple;
        c.scale = total;
    } else if (subadditivity_verdict(m, seed, 8).pass) {
        c.cls = MeasureClass::Measure;
    } else {
        c.cls = MeasureClass::Other;
    }
    return c;
}

}  // namespace qmeas
