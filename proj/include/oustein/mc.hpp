// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace oustein {

enum class Exec { Serial, Parallel };

struct MCSpec {
    std::size_t n = 10000;
    int level = 6;          // Brownian truncation level J
    std::uint64_t seed = 0;
    bool crn = true;        // reuse one Z stream across coupled estimates
    Exec exec = Exec::Parallel;
};

struct MCEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;   // sample std / sqrt(n)
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Numerically stable summation with a thread-count-independent order.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error via pairwise sums; deterministic given the buffer.
MCEstimate summarize(std::span<const double> samples, std::uint64_t seed);

/// Fill out[i] = f(i) for i < n, optionally with OpenMP. f must be pure in i.
template <class F>
void fill_samples(std::vector<double>& out, std::size_t n, Exec exec, F&& f) {
    out.resize(n);
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (long long i = 0; i < nn; ++i)
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
}

} // namespace oustein
