// SPDX-License-Identifier: Apache-2.0
#include "oustein/schauder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "oustein/mc.hpp"
#include "oustein/rng.hpp"

namespace oustein {

int dyadic_level(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("dyadic_level: k must be >= 1");
    return std::bit_width(k) - 1;
}

double haar(std::uint64_t k, double u) {
    if (k == 0)
        throw std::invalid_argument("haar: H_0 is not defined, use schauder(0,.)");
    if (u < 0.0 || u > 1.0)
        throw std::invalid_argument("haar: u outside [0,1]");
    const int n = dyadic_level(k);
    const double len = std::ldexp(1.0, -n);
    const double a = static_cast<double>(k) * len - 1.0;
    const double m = a + 0.5 * len;
    const double b = a + len;
    const double amp = std::sqrt(std::ldexp(1.0, n));
    if (u >= a && u <= m) return amp;  // closed first window
    if (u > m && u <= b) return -amp;  // half-open second window
    return 0.0;
}

double schauder(std::uint64_t k, double t) {
    if (t < 0.0 || t > 1.0)
        throw std::invalid_argument("schauder: t outside [0,1]");
    if (k == 0) return t;
    const int n = dyadic_level(k);
    const double len = std::ldexp(1.0, -n);
    const double a = static_cast<double>(k) * len - 1.0;
    const double local = t - a;
    if (local <= 0.0 || local >= len) return 0.0;
    const double amp = std::sqrt(std::ldexp(1.0, n));
    return amp * std::min(local, len - local);
}

namespace {

std::vector<double> hat_grid_values(std::uint64_t k, int grid_level) {
    const std::size_t n_points = (std::size_t{1} << grid_level) + 1;
    std::vector<double> v(n_points, 0.0);
    const double h = std::ldexp(1.0, -grid_level);
    if (k == 0) {
        for (std::size_t i = 0; i < n_points; ++i)
            v[i] = static_cast<double>(i) * h;
        return v;
    }
    const int n = dyadic_level(k);
    // support [a, a + 2^{-n}] covers cells of the grid exactly
    const std::size_t cells = std::size_t{1} << (grid_level - n);
    const std::size_t ia = k * cells - (std::size_t{1} << grid_level);
    const double amp = std::sqrt(std::ldexp(1.0, n));
    for (std::size_t j = 1; j < cells; ++j)
        v[ia + j] = amp * h * static_cast<double>(std::min(j, cells - j));
    return v;
}

} // namespace

SchauderTable::SchauderTable(int J) : trunc_level_(J) {
    if (J < 0) throw std::invalid_argument("SchauderTable: negative level");
    const std::size_t count = basis_count(J);
    entries_.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        entries_.emplace_back(grid_level(), hat_grid_values(k, grid_level()));
}

const SchauderTable& SchauderTable::cached(int J) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SchauderTable>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[J];
    if (!slot) slot = std::make_unique<SchauderTable>(J);
    return *slot;
}

void brownian_coefficients(int J, std::uint64_t seed, std::uint64_t index,
                           std::span<double> out) {
    const std::size_t count = basis_count(J);
    if (out.size() != count)
        throw std::invalid_argument("brownian_coefficients: bad output size");
    for (std::size_t k = 0; k < count; ++k)
        out[k] = counter_normal(seed, index, k);
}

void synthesize_brownian(std::span<const double> xi, int J,
                         std::span<double> grid_out) {
    const int G = J + 1;
    const std::size_t n_points = (std::size_t{1} << G) + 1;
    if (grid_out.size() != n_points)
        throw std::invalid_argument("synthesize_brownian: bad grid size");
    if (xi.size() != basis_count(J))
        throw std::invalid_argument("synthesize_brownian: bad coefficient count");
    const double h = std::ldexp(1.0, -G);
    for (std::size_t i = 0; i < n_points; ++i)
        grid_out[i] = xi[0] * static_cast<double>(i) * h;
    for (std::size_t k = 1; k < xi.size(); ++k) {
        if (xi[k] == 0.0) continue;
        const int n = dyadic_level(k);
        const std::size_t cells = std::size_t{1} << (G - n);
        const std::size_t ia = k * cells - (std::size_t{1} << G);
        const double amp = xi[k] * std::sqrt(std::ldexp(1.0, n)) * h;
        for (std::size_t j = 1; j < cells; ++j)
            grid_out[ia + j] += amp * static_cast<double>(std::min(j, cells - j));
    }
}

BrownianSample sample_brownian(int J, std::uint64_t seed, std::uint64_t index) {
    if (J < 0) throw std::invalid_argument("sample_brownian: negative level");
    std::vector<double> xi(basis_count(J));
    brownian_coefficients(J, seed, index, xi);
    std::vector<double> grid((std::size_t{1} << (J + 1)) + 1);
    synthesize_brownian(xi, J, grid);
    return BrownianSample{Path(J + 1, std::move(grid)), std::move(xi), seed, index};
}

const SupNormMoments& brownian_sup_moments() {
    static const SupNormMoments cached = [] {
        constexpr std::size_t n = 200000;
        constexpr int J = 8;
        constexpr std::uint64_t seed = 0x6f75737465696eull; // fixed internal seed
        std::vector<double> m1(n), m2(n), m3(n);
        const std::size_t coeffs = basis_count(J);
        const std::size_t grid_n = (std::size_t{1} << (J + 1)) + 1;
#pragma omp parallel
        {
            std::vector<double> xi(coeffs), grid(grid_n);
#pragma omp for schedule(static)
            for (long long i = 0; i < static_cast<long long>(n); ++i) {
                brownian_coefficients(J, seed, static_cast<std::uint64_t>(i), xi);
                synthesize_brownian(xi, J, grid);
                double s = 0.0;
                for (double v : grid) s = std::max(s, std::abs(v));
                m1[i] = s;
                m2[i] = s * s;
                m3[i] = s * s * s;
            }
        }
        auto e1 = summarize(m1, seed);
        auto e2 = summarize(m2, seed);
        auto e3 = summarize(m3, seed);
        return SupNormMoments{e1.mean, e2.mean, e3.mean,
                              e1.stderr_, e2.stderr_, e3.stderr_, n, seed};
    }();
    return cached;
}

} // namespace oustein
