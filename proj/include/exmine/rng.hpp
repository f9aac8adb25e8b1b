#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace exmine {

/// xoshiro256** (Blackman & Vigna), seeded through SplitMix64.
///
/// Seeding: z0 = seed; for each of the four state words
///     z += 0x9E3779B97F4A7C15
///     x  = z;  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
///              x = (x ^ (x >> 27)) * 0x94D049BB133111EB
///     s[i] = x ^ (x >> 31)
/// Step:
///     out  = rotl(s1 * 5, 7) * 9
///     t    = s1 << 17
///     s2 ^= s0;  s3 ^= s1;  s1 ^= s2;  s0 ^= s3;  s2 ^= t;  s3 = rotl(s3, 45)
/// Derived quantities use only integer arithmetic plus log/sqrt/cos, so streams are
/// identical on every IEEE-754 platform with a faithful libm.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits: (next >> 11) * 2^-53.
    double uniform();

    /// Uniform integer in [0, bound), Lemire's multiply-and-reject.
    std::uint64_t below(std::uint64_t bound);

    /// Exponential with the given mean: -mean * log(1 - u).
    double exponential(double mean);

    /// Standard normal via the Box-Muller transform (one draw per call, no caching).
    double normal();

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace exmine
