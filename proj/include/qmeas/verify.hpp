// Verifiers for the measure axioms and for classification of a set function
// by its observed value range.
//
// Every verifier is sampling-based: it draws stable regions from a seeded
// generator that keeps the measure's distinguished points clear of all
// generated boundaries, evaluates the relevant identity, and reports the
// largest violation together with a reproducing witness.
#pragma once

#include <cstdint>
#include <string>

#include "qmeas/measure.hpp"
#include "qmeas/verdict.hpp"

namespace qmeas {

// Additivity on disjoint pairs of the same kind, the compact/open complement
// identity, inner approximation by eroded compacts, and outer approximation
// by dilated opens.  These hold for every value assignment this library
// constructs, measure or not.
Verdict verify_tm_axioms(const TopMeasure& m, uint64_t seed, int trials = 8);

// Monotone subadditivity mu(A u B) <= mu(A) + mu(B) on arbitrary same-kind
// pairs; equivalent to extendability to a genuine measure.  Trial 0 tries
// the canonical corridor pair before any random draws, so two-valued
// non-measures fail deterministically.
Verdict subadditivity_verdict(const TopMeasure& m, uint64_t seed, int trials = 12);

enum class MeasureClass { Simple, AlmostSimple, Measure, Other };

struct Classification {
    MeasureClass cls = MeasureClass::Other;
    double scale = 0.0;  // the c of a {0, c} range; 1 for simple, 0 otherwise
    std::string name() const;
};

// Classifies by sampled value range, most specific class first: values in
// {0, 1} with unit total, values in {0, c}, subadditive, anything else.
Classification classify(const TopMeasure& m, uint64_t seed);

}  // namespace qmeas
