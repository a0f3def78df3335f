#pragma once

#include <cstdint>

namespace exhawkes {

/// xoshiro256++ with splitmix64 seeding. Self-contained so that seeded runs
/// reproduce byte-identically across standard libraries and platforms;
/// std::poisson_distribution makes no such guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double next_double();

    /// Exact Poisson draw. Sequential-search inversion for small means,
    /// Hormann's PTRS transformed rejection for mean >= 10.
    std::int64_t poisson(double mean);

private:
    std::uint64_t s_[4];
};

} // namespace exhawkes
