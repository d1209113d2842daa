// Quasi-integration against a topological measure via the threshold ladder:
// the distribution function F(t) = mu({f > t}) is evaluated on a uniform
// ladder spanning the sample range, its Stieltjes atoms are summed, and the
// functional verifiers (recovery, simplicity, almost-simplicity, continuity)
// are built on top.
//
// Evaluation routes, chosen per measure:
//   point mass      weight * f(location), exact;
//   two-valued      c * (jump location of F), found by binary search over
//                   the sorted distinct samples, exact at grid scale;
//   everything else the midpoint ladder, with the first bin located at the
//                   minimum sample so nonnegative inputs integrate to
//                   nonnegative values exactly.
// Signed inputs integrate as rho(f+) - rho(f-) and are cross-checked against
// the two-sided ladder; disagreement beyond tolerance is a logic error.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qmeas/func.hpp"
#include "qmeas/measure.hpp"
#include "qmeas/verdict.hpp"

namespace qmeas {

struct DistributionFn {
    std::vector<double> thresholds;  // t_0 < ... < t_K, spans [min-w, max+w]
    std::vector<double> values;      // F(t_j), antitone
    double bin_width = 0.0;
};

struct StieltjesAtom {
    double location;
    double mass;
};

struct StieltjesAtoms {
    std::vector<StieltjesAtom> atoms;
    double bin_width = 0.0;
    double total_mass() const;
};

class QuasiFunctional {
  public:
    QuasiFunctional(TopMeasure mu, int thresholds = 512);

    const TopMeasure& measure() const { return mu_; }
    const Grid& grid() const { return mu_.grid(); }
    int thresholds() const { return k_; }

    // mu({f > t}).
    double distribution_at(const CompactFunc& f, double t) const;
    // F over the whole ladder.  Interior thresholds that collide with a
    // sample value are pushed up half a bin so plateau mass is never read on
    // the wrong side of its own level.
    DistributionFn distribution(const CompactFunc& f) const;
    StieltjesAtoms atoms(const CompactFunc& f) const;

    double quasi_integral(const CompactFunc& f) const;
    double operator()(const CompactFunc& f) const { return quasi_integral(f); }

    // Sum of phi(location) * mass over the atoms of f; agreement with
    // quasi_integral(compose(phi, f)) is the generator-integration identity
    // the scenarios check.
    double integrate_generator(const CompactFunc& f, const PhiCurve& phi) const;

    // |rho((phi+psi) o f) - rho(phi o f) - rho(psi o f)|.
    double qi2_residual(const CompactFunc& f, const PhiCurve& phi, const PhiCurve& psi) const;

    // sup of rho over plateaus 1 on erode(u, j), supported inside u.
    double recover_open(const Region& u, int plateau_ladder = 4) const;
    // inf of rho over plateaus 1 on k, supported in dilate(k, j).
    double recover_compact(const Region& k, int plateau_ladder = 4) const;

    // Default first-order error budget: 5 (||f||/K + Lip(f) h) mu(X).
    double tolerance_for(const CompactFunc& f) const;
    // Sharp ladder quantization bound: one bin width times the total mass.
    // Valid because every atom sits within its own bin.
    double ladder_error(const CompactFunc& f) const;

  private:
    double nonneg_integral(const CompactFunc& f) const;
    double two_sided_ladder(const CompactFunc& f) const;

    TopMeasure mu_;
    int k_;
};

// Functions with disjoint supports and quasi-integral 1 each.  Throws
// NotEnoughValues when mu takes only two values (simple or almost simple
// measures admit no such pair).
std::pair<CompactFunc, CompactFunc> disjoint_unit_pair(const QuasiFunctional& q, uint64_t seed);

// Three equivalent conditions for a unit-total functional: atom mass
// concentrates within two bins of rho(f); rho(phi o f) = phi(rho(f));
// rho((phi psi) o f) = rho(phi o f) rho(psi o f).  Trial 0 uses the
// coordinate function and a peaked curve, which separates measures from
// simple functionals decisively; later trials are random draws.
Verdict simplicity_verdict(const QuasiFunctional& q, int trials, uint64_t seed);

// rho(f) rho(g) = 0 for every pair with disjoint supports.
Verdict almost_simple_verdict(const QuasiFunctional& q, int trials, uint64_t seed);

// |rho(f) - rho(g)| <= 2 ||f-g|| mu(K) with K the union of supports, and the
// factor-1 bound when both inputs are nonnegative.  Ladder-routed measures
// use one shared ladder for both integrals so the bound carries only a
// single-bin slack.
Verdict continuity_check(const QuasiFunctional& q, const CompactFunc& f, const CompactFunc& g);

}  // namespace qmeas
