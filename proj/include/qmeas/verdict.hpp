// Verdicts are the results of property verifiers.  A failing verdict always
// carries a witness: the named values that exhibit the violation together
// with the seed and trial index that reproduce it.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qmeas {

struct Witness {
    std::string description;
    std::vector<std::pair<std::string, double>> values;
    uint64_t seed = 0;
    int trial = -1;
};

struct Verdict {
    bool pass = false;
    std::string conclusion;      // short tag, e.g. "subadditive", "not-simple"
    double residual = 0.0;       // largest violation observed (0 when passing)
    double tolerance = 0.0;      // tolerance the residual was compared against
    std::string detail;
    std::optional<Witness> witness;

    static Verdict ok(std::string tag, double tol = 0.0, std::string detail_text = {}) {
        Verdict v;
        v.pass = true;
        v.conclusion = std::move(tag);
        v.tolerance = tol;
        v.detail = std::move(detail_text);
        return v;
    }
    static Verdict fail(std::string tag, double residual, double tol, Witness w) {
        Verdict v;
        v.pass = false;
        v.conclusion = std::move(tag);
        v.residual = residual;
        v.tolerance = tol;
        v.witness = std::move(w);
        return v;
    }
};

}  // namespace qmeas
