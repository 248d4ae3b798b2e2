// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oustein/path.hpp"

namespace oustein {

/// Dyadic level n of index k >= 1, i.e. the unique n with 2^n <= k < 2^{n+1}.
int dyadic_level(std::uint64_t k);

/// Haar function H_k(u), k >= 1. The first half of the support window is
/// closed, the second half is half-open.
double haar(std::uint64_t k, double u);

/// Schauder function S_k(t): S_0(t) = t; for k >= 1 the triangular hat of
/// height 2^{-n/2-1} supported on [k/2^n - 1, (k+1)/2^n - 1].
double schauder(std::uint64_t k, double t);

/// Number of basis functions kept at truncation level J: indices k < 2^{J+1}.
inline std::size_t basis_count(int J) { return std::size_t{1} << (J + 1); }

/// Precomputed S_k for k < 2^{J+1}, stored grid-exactly at level J+1
/// (every kept S_k is piecewise-linear with breakpoints at level <= J+1).
class SchauderTable {
public:
    explicit SchauderTable(int J);

    int truncation_level() const { return trunc_level_; }
    int grid_level() const { return trunc_level_ + 1; }
    std::size_t size() const { return entries_.size(); }
    const Path& operator[](std::size_t k) const { return entries_[k]; }

    /// Shared, cached instance.
    static const SchauderTable& cached(int J);

private:
    int trunc_level_;
    std::vector<Path> entries_;
};

struct BrownianSample {
    Path path;                        // level J+1
    std::vector<double> coefficients; // xi_k, k < 2^{J+1}
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

/// Coefficients xi_k of sample `index` of the level-J truncated construction.
void brownian_coefficients(int J, std::uint64_t seed, std::uint64_t index,
                           std::span<double> out);

/// Evaluate sum_k xi_k S_k on the level J+1 grid. `grid_out` must have
/// 2^{J+1} + 1 entries. Closed-form per-hat fill, exact at the nodes.
void synthesize_brownian(std::span<const double> xi, int J,
                         std::span<double> grid_out);

/// Z = sum_{k < 2^{J+1}} xi_k S_k with i.i.d. standard normal xi_k drawn from
/// the counter-based generator keyed by (seed, index, k).
BrownianSample sample_brownian(int J, std::uint64_t seed, std::uint64_t index = 0);

struct SupNormMoments {
    double m1, m2, m3;    // E||Z||, E||Z||^2, E||Z||^3
    double se1, se2, se3; // standard errors of the estimates
    std::size_t n;
    std::uint64_t seed;
};

/// Monte-Carlo estimates of the sup-norm moments of Z, computed once per
/// process at a fixed seed and cached.
const SupNormMoments& brownian_sup_moments();

} // namespace oustein
