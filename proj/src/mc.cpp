// SPDX-License-Identifier: Apache-2.0
#include "oustein/mc.hpp"

#include <cmath>

namespace oustein {

namespace {

double pairwise_block(std::span<const double> v) {
    if (v.size() <= 64) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_block(v.first(half)) + pairwise_block(v.subspan(half));
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_block(values);
}

MCEstimate summarize(std::span<const double> samples, std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n == 0) return MCEstimate{0.0, 0.0, 0, seed};
    const double mean = pairwise_sum(samples) / static_cast<double>(n);
    if (n == 1) return MCEstimate{mean, 0.0, 1, seed};
    std::vector<double> dev2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = samples[i] - mean;
        dev2[i] = d * d;
    }
    const double var = pairwise_sum(dev2) / static_cast<double>(n - 1);
    return MCEstimate{mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

} // namespace oustein
