// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oustein/functionals.hpp"
#include "oustein/schauder.hpp"
#include "oustein/stein.hpp"

using namespace oustein;

namespace {
Path rnd(int level, std::uint64_t seed) {
    return sample_brownian(level, seed, 0).path;
}
} // namespace

TEST_CASE("library values at simple paths") {
    const Path two = Path::constant(2.0, 3);
    CHECK(terminal_square()(two) == 3.0);
    CHECK(terminal_linear()(two) == 2.0);
    CHECK(integral_square()(two) == doctest::Approx(4.0 - 1.0 / 3.0));
    CHECK(terminal_cube()(two) == 8.0);
    // f(w_k) = 0 at the witness paths: sin(k pi) = 0
    const double pi = 3.14159265358979323846;
    CHECK(counterexample_functional()(Path::constant(pi, 3)) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("finite differences agree with exact derivatives") {
    const Functional fns[] = {terminal_linear(), terminal_square(),
                              integral_square(), terminal_cube()};
    std::uint64_t s = 11;
    for (const Functional& f : fns) {
        for (int rep = 0; rep < 5; ++rep) {
            const Path w = rnd(5, ++s);
            const Path h = rnd(5, ++s);
            const double eg = f.grad_dir(w, h);
            const double eh = f.hess_dir(w, h, h);
            CHECK(fd_grad(f, w, h) ==
                  doctest::Approx(eg).epsilon(1e-5).scale(1.0));
            CHECK(fd_hess(f, w, h) ==
                  doctest::Approx(eh).epsilon(1e-3).scale(1.0));
        }
    }
}

TEST_CASE("hessian is symmetric and bilinear") {
    const Functional f = terminal_cube();
    const Path w = rnd(4, 5);
    const Path h1 = rnd(4, 6);
    const Path h2 = rnd(4, 8);
    CHECK(f.hess_dir(w, h1, h2) == doctest::Approx(f.hess_dir(w, h2, h1)));
    const Path sum = affine(2.0, h1, 1.0, h2);
    CHECK(f.hess_dir(w, sum, h2) ==
          doctest::Approx(2.0 * f.hess_dir(w, h1, h2) + f.hess_dir(w, h2, h2))
              .epsilon(1e-12));
}

TEST_CASE("counterexample functional has no derivative oracle") {
    const Functional f = counterexample_functional();
    CHECK_FALSE(f.has_derivatives());
    const Path w = rnd(3, 1);
    CHECK_THROWS_AS(f.grad_dir(w, w), DerivativesUnavailable);
    CHECK_THROWS_AS(f.hess_dir(w, w, w), DerivativesUnavailable);
}

TEST_CASE("declared L bounds hold on samples and large constants") {
    std::uint64_t s = 40;
    for (const auto& [name, make] : functional_registry()) {
        const Functional f = make();
        const double L = f.info().L_bound;
        for (int rep = 0; rep < 20; ++rep) {
            const Path w = rnd(5, ++s);
            const double wn = w.sup_norm();
            CHECK(std::abs(f(w)) <= L * (1.0 + wn * wn * wn) * (1.0 + 1e-12));
        }
        for (double c : {1.0, 10.0, 100.0, 1000.0}) {
            for (double sign : {1.0, -1.0}) {
                const Path w = Path::constant(sign * c, 2);
                CHECK(std::abs(f(w)) <= L * (1.0 + c * c * c) * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("lipschitz probe confirms declared constants") {
    for (const char* name :
         {"terminal_linear", "terminal_square", "integral_square",
          "terminal_cube"}) {
        const LipschitzReport rep =
            lipschitz_probe(functional_by_name(name), 200, 77);
        CHECK(rep.pass);
        CHECK(rep.worst_ratio <= rep.declared_c);
    }
}

TEST_CASE("scaled and combined functionals propagate structure") {
    const Functional f = scaled(terminal_square(), -0.5);
    const Path two = Path::constant(2.0, 3);
    CHECK(f(two) == -1.5);
    CHECK(f.has_derivatives());
    CHECK(f.linear_stat().has_value());
    CHECK(f.grad_dir(two, two) == doctest::Approx(-4.0));
    CHECK(*f.info().mean_under_Z == 0.0);

    const Functional g =
        linear_combination(1.0, terminal_square(), 2.0, integral_square());
    CHECK(g(two) == doctest::Approx(3.0 + 2.0 * (4.0 - 1.0 / 3.0)));
    CHECK(g.has_derivatives());
    CHECK(g.constant_hessian());
}

TEST_CASE("registry lookup and rejection") {
    CHECK(functional_registry().size() == 5);
    CHECK(functional_by_name("terminal_square").name() == "terminal_square");
    CHECK_THROWS_AS(functional_by_name("nope"), std::invalid_argument);
}

TEST_CASE("fd rejects zero directions") {
    const Path w = rnd(3, 2);
    const Path zero = Path::zero(3);
    CHECK_THROWS(fd_grad(terminal_square(), w, zero));
    CHECK_THROWS(fd_hess(terminal_square(), w, zero));
}
