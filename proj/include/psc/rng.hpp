#pragma once

#include <cstdint>
#include <random>

namespace psc {

/// Seeded random source with hand-rolled distributions so that streams are
/// reproducible independently of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t integer(std::uint64_t bound);

    /// Standard normal via the Marsaglia polar method.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace psc
