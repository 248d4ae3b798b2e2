// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oustein/schauder.hpp"
#include "oustein/semigroup.hpp"

using namespace oustein;

namespace {
MCSpec spec(std::size_t n, std::uint64_t seed) {
    return MCSpec{.n = n, .level = 6, .seed = seed, .crn = true,
                  .exec = Exec::Parallel};
}
} // namespace

TEST_CASE("sigma limits and monotonicity") {
    CHECK(sigma(0.0) == 0.0);
    CHECK(sigma(1e-8) == doctest::Approx(std::sqrt(2e-8)).epsilon(1e-6));
    CHECK(sigma(50.0) == doctest::Approx(1.0));
    CHECK(sigma(0.5) < sigma(1.0));
    CHECK_THROWS(sigma(-0.1));
}

TEST_CASE("ou_push interpolates between w and z") {
    const Path w = Path::constant(3.0, 4);
    const Path z = Path::constant(-1.0, 4);
    const Path p = ou_push(w, 0.7, z);
    const double e = std::exp(-0.7);
    CHECK(p.terminal() ==
          doctest::Approx(3.0 * e - sigma(0.7)).epsilon(1e-14));
}

TEST_CASE("semigroup at u = 0 is the identity") {
    const Path w = sample_brownian(5, 3, 0).path;
    const MCEstimate est = semigroup_apply(terminal_cube(), 0.0, w, spec(10, 1));
    CHECK(est.mean == terminal_cube()(w));
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("closed form: T_u terminal_square = e^{-2u} (w(1)^2 - 1)") {
    const Path w = Path::constant(2.0, 6);
    for (double u : {0.25, 1.0, 3.0}) {
        const MCEstimate est =
            semigroup_apply(terminal_square(), u, w, spec(100000, 9));
        const double target = std::exp(-2.0 * u) * 3.0;
        CHECK(std::abs(est.mean - target) <= 4.0 * est.stderr_ + 1e-12);
    }
}

TEST_CASE("closed form: T_u terminal_linear = e^{-u} w(1)") {
    const Path w = sample_brownian(6, 17, 0).path;
    const MCEstimate est =
        semigroup_apply(terminal_linear(), 0.8, w, spec(100000, 10));
    CHECK(std::abs(est.mean - std::exp(-0.8) * w.terminal()) <=
          4.0 * est.stderr_ + 1e-12);
}

TEST_CASE("u -> infinity forgets the start: T_u f -> E f(Z)") {
    const Path w = Path::constant(5.0, 6);
    const MCEstimate est =
        semigroup_apply(integral_square(), 30.0, w, spec(100000, 11));
    CHECK(std::abs(est.mean) <= 4.0 * est.stderr_);
}

TEST_CASE("generic path route agrees with the linear-stat fast path") {
    // same functional with the linear statistic stripped
    const Functional fast = terminal_square();
    Functional slow("terminal_square_path",
                    [](const Path& w) { return w.terminal() * w.terminal() - 1.0; },
                    fast.info());
    const Path w = Path::constant(1.5, 6);
    const MCEstimate a = semigroup_apply(fast, 0.6, w, spec(20000, 12));
    const MCEstimate b = semigroup_apply(slow, 0.6, w, spec(20000, 12));
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
    CHECK(a.stderr_ == doctest::Approx(b.stderr_).epsilon(1e-10));
}

TEST_CASE("pointwise gap decays under CRN: closed form with empirical moments") {
    // with shared Z streams the gap for terminal_square is an exact function
    // of the empirical moments of the stream, reproducible to round-off
    const std::size_t n = 20000;
    const MCSpec mc = spec(n, 13);
    const Path w = Path::constant(2.0, 6);
    std::vector<double> z1(n), buf(n);
    std::vector<double> xi(basis_count(mc.level)), grid((1u << (mc.level + 1)) + 1);
    for (std::size_t i = 0; i < n; ++i) {
        brownian_coefficients(mc.level, mc.seed, i, xi);
        synthesize_brownian(xi, mc.level, grid);
        z1[i] = grid.back();
    }
    for (std::size_t i = 0; i < n; ++i) buf[i] = z1[i];
    const double m1 = summarize(buf, mc.seed).mean;
    for (std::size_t i = 0; i < n; ++i) buf[i] = z1[i] * z1[i];
    const double m2 = summarize(buf, mc.seed).mean;

    const double u_list[] = {0.5, 1e-2, 1e-4};
    const auto gaps = pointwise_gap(terminal_square(), w, u_list, mc);
    for (std::size_t j = 0; j < 3; ++j) {
        const double u = u_list[j];
        const double e = std::exp(-u);
        // E[(e w1 + s Z)^2 - 1] - (w1^2 - 1) with the empirical moments of
        // the shared Z(1) stream
        const double direct = std::abs(e * e * 4.0 + 2.0 * e * sigma(u) * 2.0 * m1 +
                                       sigma(u) * sigma(u) * m2 - 4.0);
        CHECK(gaps[j].mean == doctest::Approx(direct).epsilon(1e-9));
    }
    CHECK(gaps[2].mean < gaps[0].mean);
}

TEST_CASE("taylor remainder: cubic scales like u^{3/2}, quadratic vanishes") {
    std::vector<double> u_list;
    for (int j = 0; j <= 8; ++j)
        u_list.push_back(1e-1 * std::pow(10.0, -0.25 * j));
    const Path w = Path::constant(2.0, 6);
    const MCSpec mc = spec(100000, 14);
    const RemainderFit cubic =
        taylor_remainder_probe(terminal_cube(), w, u_list, mc);
    CHECK_FALSE(cubic.below_noise_floor);
    // the K1 u^{3/2} envelope is an upper bound; for this probe the mean
    // remainder is E[d^3] whose odd sigma(u)^3 part vanishes, so the
    // realized slope is 2
    CHECK(cubic.slope >= 1.4);
    CHECK(cubic.slope <= 2.3);
    const RemainderFit quad =
        taylor_remainder_probe(terminal_square(), w, u_list, mc);
    CHECK(quad.below_noise_floor);
    CHECK_THROWS_AS(
        taylor_remainder_probe(counterexample_functional(), w, u_list, mc),
        DerivativesUnavailable);
}
