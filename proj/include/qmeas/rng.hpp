// Deterministic random source.  All randomness in the library flows through
// this wrapper; uniform doubles are derived from raw engine words (not
// std::uniform_real_distribution) so streams are identical across standard
// library implementations.  fork(tag) derives an independent, reproducible
// substream, which is how each scenario and each verifier gets its own
// generator from one seed.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qmeas {

uint64_t fnv1a(std::string_view s);

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(eng_() % static_cast<uint64_t>(hi - lo + 1));
    }

    bool coin(double p = 0.5) { return uniform() < p; }

    Rng fork(std::string_view tag) {
        std::seed_seq seq{eng_(), fnv1a(tag)};
        std::mt19937_64 e(seq);
        return Rng(e());
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace qmeas
