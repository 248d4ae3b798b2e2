// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oustein/quadrature.hpp"
#include "oustein/schauder.hpp"
#include "oustein/semigroup.hpp"
#include "oustein/stein.hpp"

using namespace oustein;

namespace {

QuadratureSpec quad(std::size_t n, std::uint64_t seed, int panels = 32) {
    return QuadratureSpec{.u_max = 20.0, .panels = panels, .nodes_per_panel = 8,
                          .mc = MCSpec{.n = n, .level = 6, .seed = seed,
                                       .crn = true, .exec = Exec::Parallel}};
}

/// g(w) = w(1) int w - 1/2: centered under the Brownian law, constant
/// Hessian, no scalar-statistic shortcut, closed form phi(g) = -g/2.
Functional bilinear() {
    Functional f(
        "bilinear",
        [](const Path& w) { return w.terminal() * w.integral() - 0.5; },
        GrowthInfo{1.0, 2.0, 0.0});
    f.with_derivatives(
        [](const Path& w, const Path& h) {
            return h.terminal() * w.integral() + w.terminal() * h.integral();
        },
        [](const Path&, const Path& h1, const Path& h2) {
            return h1.terminal() * h2.integral() + h2.terminal() * h1.integral();
        },
        /*constant_hessian=*/true);
    return f;
}

} // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto rule = gauss_legendre(4);
    double acc = 0.0;
    for (const auto& [x, wgt] : rule) acc += wgt * x * x * x * x * x * x;
    CHECK(acc == doctest::Approx(2.0 / 7.0).epsilon(1e-13));
    const PanelRule comp = composite_gauss_legendre(0.0, 20.0, 32, 8);
    double e = 0.0;
    for (std::size_t j = 0; j < comp.size(); ++j)
        e += comp.weights[j] * std::exp(-comp.nodes[j]);
    CHECK(e == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-13));
}

TEST_CASE("operator series closed forms") {
    const Path two = Path::constant(2.0, 6);
    // A g = -2 g for terminal_square
    CHECK(stein_operator_series(terminal_square(), two, 8) ==
          doctest::Approx(-6.0).epsilon(1e-12));
    // A g = -g for terminal_linear
    CHECK(stein_operator_series(terminal_linear(), two, 8) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    // integral_square: -2 s^2 + 2 sum_k (int S_k)^2 with s = int w
    const double parseval = 1.0 / 3.0 - std::pow(4.0, -9) / 12.0;
    CHECK(stein_operator_series(integral_square(), two, 8) ==
          doctest::Approx(-8.0 + 2.0 * parseval).epsilon(1e-12));
    // bilinear: A g = -2 g, only S_0 reaches t = 1
    const Path w = sample_brownian(5, 21, 0).path;
    CHECK(stein_operator_series(bilinear(), w, 8) ==
          doctest::Approx(-2.0 * bilinear()(w)).epsilon(1e-10));
}

TEST_CASE("operator series is linear in the functional") {
    const Path w = sample_brownian(5, 22, 0).path;
    const Functional combo =
        linear_combination(2.0, terminal_square(), -3.0, integral_square());
    const double lhs = stein_operator_series(combo, w, 8);
    const double rhs = 2.0 * stein_operator_series(terminal_square(), w, 8) -
                       3.0 * stein_operator_series(integral_square(), w, 8);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("operator MC agrees with the series") {
    const MCSpec mc{.n = 50000, .level = 6, .seed = 23, .crn = true,
                    .exec = Exec::Parallel};
    const Path w = Path::constant(1.5, 6);
    for (const Functional& f :
         {terminal_square(), integral_square(), bilinear()}) {
        const MCEstimate est = stein_operator_mc(f, w, mc);
        const double series = stein_operator_series(f, w, 8);
        CHECK(std::abs(est.mean - series) <= 4.0 * est.stderr_ + 1e-3);
    }
}

TEST_CASE("stationarity: the operator kills the Brownian law") {
    const MCSpec mc{.n = 20000, .level = 6, .seed = 24, .crn = true,
                    .exec = Exec::Parallel};
    for (const Functional& f :
         {terminal_square(), integral_square(), bilinear()}) {
        std::vector<double> buf(mc.n);
        for (std::size_t i = 0; i < mc.n; ++i)
            buf[i] = stein_operator_series(f, sample_brownian(mc.level, mc.seed, i).path,
                                           mc.level);
        const MCEstimate est = summarize(buf, mc.seed);
        // truncation of the series at the sampler level keeps bias ~ 2^{-J}
        CHECK(std::abs(est.mean) <= 4.0 * est.stderr_ + 2e-2);
    }
}

TEST_CASE("closed-form Stein solutions") {
    const QuadratureSpec q = quad(40000, 25);
    const Path w = sample_brownian(6, 26, 0).path;
    struct Case {
        Functional g;
        double target;
    };
    const double w1 = w.terminal(), wi = w.integral();
    const Case cases[] = {
        {terminal_linear(), -w1},
        {terminal_square(), -(w1 * w1 - 1.0) / 2.0},
        {integral_square(), -(wi * wi - 1.0 / 3.0) / 2.0},
        {bilinear(), -(w1 * wi - 0.5) / 2.0},
    };
    for (const Case& c : cases) {
        const SteinReport r = stein_solution(c.g, w, q);
        CHECK(r.pass);
        CHECK(std::abs(r.value - c.target) <=
              6.0 * r.stderr_ + r.tail_bound + 1e-3);
    }
}

TEST_CASE("solution derivative closed form") {
    const QuadratureSpec q = quad(40000, 27);
    const Path w = Path::constant(1.5, 6);
    const Path h = sample_brownian(6, 28, 0).path;
    // phi = -(w(1)^2-1)/2, D phi(w)[h] = -w(1) h(1)
    CHECK(stein_solution_derivative(terminal_square(), w, h, 1, q) ==
          doctest::Approx(-1.5 * h.terminal()).epsilon(0.03).scale(1.0));
    // D2 phi(w)[h,h] = -h(1)^2
    CHECK(stein_solution_derivative(terminal_square(), w, h, 2, q) ==
          doctest::Approx(-h.terminal() * h.terminal()).epsilon(0.03).scale(1.0));
    CHECK_THROWS(stein_solution_derivative(terminal_square(), w, h, 3, q));
}

TEST_CASE("stein residual vanishes for library functionals") {
    const QuadratureSpec q = quad(40000, 29);
    const Path w = sample_brownian(6, 30, 0).path;
    for (const Functional& g :
         {terminal_linear(), terminal_square(), integral_square(), bilinear()}) {
        const SteinReport r = stein_residual(g, w, q, 8);
        CHECK(r.pass);
        CHECK(r.residual.has_value());
        CHECK(std::abs(*r.residual) <= 0.02 * (1.0 + std::abs(g(w))) +
                                           4.0 * r.stderr_);
    }
}

TEST_CASE("finite-t identity holds with closed-form sides") {
    const QuadratureSpec q = quad(40000, 31);
    const Path w = Path::constant(2.0, 6);
    for (double t : {0.1, 1.0, 5.0}) {
        const SteinReport r = lemma3_check(terminal_square(), w, t, q, 8);
        CHECK(r.pass);
        // closed form: T_t g - g = (e^{-2t} - 1)(w1^2 - 1)
        const double lhs = (std::exp(-2.0 * t) - 1.0) * 3.0;
        CHECK(r.value == doctest::Approx(lhs).epsilon(0.02).scale(1.0));
    }
    CHECK_THROWS(lemma3_check(terminal_square(), w, 0.0, q, 8));
}

TEST_CASE("fundamental-theorem identity") {
    const QuadratureSpec q = quad(40000, 32);
    const Path w = Path::constant(2.0, 6);
    for (double r : {0.1, 1.0}) {
        for (const Functional& f :
             {scaled(terminal_square(), -0.5), terminal_linear(), bilinear()}) {
            const SteinReport rep = ftc_check(f, w, r, q, 8);
            CHECK(rep.pass);
        }
    }
    CHECK_THROWS(ftc_check(terminal_square(), w, 0.0, q, 8));
    CHECK_THROWS_AS(ftc_check(counterexample_functional(), w, 1.0, q, 8),
                    DerivativesUnavailable);
}

TEST_CASE("quadrature refinement leaves the solution stable") {
    const Path w = Path::constant(1.0, 6);
    const SteinReport coarse =
        stein_solution(terminal_square(), w, quad(20000, 33, 16));
    const SteinReport fine =
        stein_solution(terminal_square(), w, quad(20000, 33, 64));
    // sigma(u) has a sqrt(u) kink at 0, so panel refinement converges
    // algebraically, not spectrally
    CHECK(coarse.value == doctest::Approx(fine.value).epsilon(1e-4).scale(1.0));
}

TEST_CASE("functionals without a declared mean are rejected") {
    const Path w = Path::constant(1.0, 4);
    CHECK_THROWS_AS(
        stein_solution(counterexample_functional(), w, quad(100, 34)),
        std::invalid_argument);
    Functional uncentered("uncentered",
                          [](const Path& p) { return p.terminal(); },
                          GrowthInfo{1.0, 1.0, std::nullopt});
    CHECK_THROWS_AS(stein_solution(uncentered, w, quad(100, 34)),
                    std::invalid_argument);
}

TEST_CASE("growth probe matches closed-form envelopes on constants") {
    const QuadratureSpec q = quad(40000, 35);
    std::vector<Path> ws;
    for (double c : {1.0, 10.0, 100.0, 1000.0}) ws.push_back(Path::constant(c, 2));
    const GrowthReport rep = growth_probe(terminal_square(), ws, q);
    CHECK(rep.bounded);
    for (std::size_t j = 0; j < ws.size(); ++j) {
        const double c = ws[j].sup_norm();
        const double cf = (c * c - 1.0) / 2.0 / (1.0 + c * c * c);
        CHECK(rep.ratios[j] == doctest::Approx(cf).epsilon(0.02).scale(1.0));
    }
}

TEST_CASE("lipschitz probe flags an understated constant") {
    // terminal_square again, but with C_g declared far too small
    Functional f("understated", [](const Path& w) {
        return w.terminal() * w.terminal() - 1.0;
    }, GrowthInfo{1.2, 1e-4, 0.0});
    const LipschitzReport rep = lipschitz_probe(f, 200, 36);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_ratio > rep.declared_c);
}
