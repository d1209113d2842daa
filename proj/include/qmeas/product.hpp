// Iterated quasi-integration on the product of two grid rectangles and the
// product set functions it induces.
//
// An IteratedFunctional applies its inner functional to every section of a
// TensorFunc and its outer functional to the resulting one-variable function.
// The two orders agree for tensor products g (x) h but not in general; the
// verdict operations below test exactly when they agree (both factors are
// measures, or one is a scaled point mass), when the iterated functional is
// additive on generator sums (outer factor a measure, or inner factor almost
// simple), and how simplicity propagates between the factors and the product.
//
// product_tm evaluates the induced product set function on a ProductRegion
// through its SectionProfile: for a two-valued inner measure the value is
// c times the outer measure of the cells whose section evaluates to c; for a
// measure outer factor it is the class-wise integral of the section values.
// Compact regions reduce to the complementary open region.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qmeas/quasi.hpp"
#include "qmeas/tensor.hpp"
#include "qmeas/verdict.hpp"

namespace qmeas {

enum class IterationOrder {
    EtaTimesRho,  // outer on Y, inner on X: value = outer(y -> inner(f_y))
    RhoTimesEta,  // outer on X, inner on Y: value = outer(x -> inner(f_x))
};

struct IteratedFunctional {
    QuasiFunctional outer;
    QuasiFunctional inner;
    IterationOrder order = IterationOrder::EtaTimesRho;
};

// y -> rho(f_y) sampled over the Y grid.  Sections with equal coefficient
// tuples are integrated once; a point-mass measure reads f along x = x0 and a
// measure factor reduces to sum_i rho(g_i) h_i.
CompactFunc t_transform(const QuasiFunctional& rho, const TensorFunc& f);
// x -> eta(f_x) sampled over the X grid.
CompactFunc s_transform(const QuasiFunctional& eta, const TensorFunc& f);

// Outer quasi-integral of the transform.  A point-mass outer factor skips the
// full transform and evaluates the inner functional on one section.
double iterated(const IteratedFunctional& it, const TensorFunc& f);

// First-order error budget for iterated(it, f): the outer ladder error on the
// computed transform plus the propagated worst section ladder error.
double iterated_error(const IteratedFunctional& it, const TensorFunc& f);

// Value of the product set function on a ProductRegion.  Throws NotAProductTM
// when the inner measure takes more than two values and the outer factor is
// not a measure (no product topological measure exists for such pairs).
double product_tm(const IteratedFunctional& it, const ProductRegion& a);

// Whether the iterated functional (outer eta on Y, inner rho on X) is
// additive on generator sums.  Passes when eta's measure is subadditive or
// rho is almost simple, after a polynomial generator sweep; otherwise fails
// and carries the explicit violation: disjoint unit functions under rho
// tensored with a partition pair under eta whose sum eta sees but whose
// pieces it does not.
Verdict qi_criterion(const QuasiFunctional& eta, const QuasiFunctional& rho, uint64_t seed);

// Classifies eta, rho, and the product functional by multiplicativity on
// powers of sampled tensor functions, then asserts that whenever two of the
// three are simple, so is the third.  Throws NotAProductTM when the pair does
// not qualify per qi_criterion.
Verdict two_of_three_simple(const QuasiFunctional& eta, const QuasiFunctional& rho, uint64_t seed);

// Tests whether the two iteration orders agree.  Predicts the answer from
// the factor classification (equal iff both factors are measures or one is a
// scaled point mass), then verifies: sampled tensor functions and the
// point-mass section identity when equality is predicted, an explicit
// region or function witness with both order values when it is not.  Passes
// when observation matches the prediction.
Verdict fubini_verdict(const QuasiFunctional& eta, const QuasiFunctional& rho, uint64_t seed);

// One member of the rectangle-agreeing family: the combination
// a (mu x nu) + (m - a) (nu x mu) with m the product of the factor totals.
// All members agree on product rectangles; on the order-separating witness
// region the value is a times the witness gap, so distinct coefficients give
// distinct set functions.
struct ProductSetFunction {
    double a = 0.0;
    double m = 0.0;
    IteratedFunctional mu_nu;  // RhoTimesEta order, weighted by a
    IteratedFunctional nu_mu;  // EtaTimesRho order, weighted by m - a

    double operator()(const ProductRegion& r) const;
};

// Builds the family for the given coefficients, asserts pairwise agreement on
// sampled rectangles and pairwise distinctness on the witness region.
// Throws NotApplicable unless both factors are two-valued non-measures (the
// only case where the two orders disagree on a region).
std::vector<ProductSetFunction> rectangle_family(const QuasiFunctional& eta,
                                                 const QuasiFunctional& rho,
                                                 const std::vector<double>& coefficients,
                                                 uint64_t seed);

}  // namespace qmeas
