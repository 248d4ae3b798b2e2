// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace oustein {

// Counter-based generator: every variate is a pure function of
// (seed, stream, counter), so parallel sampling needs no shared state and
// results are independent of thread scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed ^ 0x8f14e45fceea167aull);
    h = splitmix64(h ^ (stream * 0xff51afd7ed558ccdull));
    h = splitmix64(h ^ (counter * 0xc4ceb9fe1a85ec53ull));
    return h;
}

/// Uniform in the open interval (0,1).
inline double to_unit_open(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16).
double inv_normal_cdf(double p);

/// Standard normal variate keyed by (seed, stream, counter).
inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
    return inv_normal_cdf(to_unit_open(counter_hash(seed, stream, counter)));
}

} // namespace oustein
