#pragma once

#include <cstdint>
#include <string_view>

namespace burstsim {

/// Deterministic 64-bit random stream (splitmix64). Every consumer owns its
/// own stream, derived from (seed, label), so call sequences are reproducible
/// bit-exactly across runs and platforms and independent streams never
/// interleave. Not cryptographic.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    /// Stream keyed on (seed, label); distinct labels give unrelated streams.
    static RngStream derive(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double();

    /// Uniform double in [lo, hi].
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

/// splitmix64 finalizer; also used as the shard-map key hash.
std::uint64_t mix64(std::uint64_t x);

}  // namespace burstsim
