// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oustein/path.hpp"

using namespace oustein;

TEST_CASE("path construction validates shape") {
    CHECK_NOTHROW(Path(2, {0.0, 1.0, 0.5, -1.0, 2.0}));
    CHECK_THROWS(Path(2, {0.0, 1.0, 0.5}));
    CHECK_THROWS(Path(1, std::vector<double>{0.0, 1.0, std::nan("")}));
}

TEST_CASE("constant and zero paths") {
    const Path z = Path::zero(3);
    CHECK(z.size() == 9);
    CHECK(z.sup_norm() == 0.0);
    const Path c = Path::constant(-2.5, 2);
    CHECK(c.sup_norm() == 2.5);
    CHECK(c.terminal() == -2.5);
    CHECK(c.integral() == doctest::Approx(-2.5).epsilon(1e-15));
}

TEST_CASE("value_at interpolates linearly") {
    const Path w(1, {0.0, 1.0, 0.0});
    CHECK(w.value_at(0.25) == doctest::Approx(0.5));
    CHECK(w.value_at(0.5) == 1.0);
    CHECK(w.value_at(0.75) == doctest::Approx(0.5));
    CHECK(w.value_at(0.0) == 0.0);
    CHECK(w.value_at(1.0) == 0.0);
}

TEST_CASE("trapezoid integral is exact for hats") {
    const Path w(1, {0.0, 1.0, 0.0});
    CHECK(w.integral() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("refinement preserves the function") {
    const Path w(2, {0.0, 0.3, -0.7, 1.1, 0.2});
    const Path r = w.refined(5);
    CHECK(r.level() == 5);
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0})
        CHECK(r.value_at(t) == doctest::Approx(w.value_at(t)).epsilon(1e-14));
    CHECK(r.integral() == doctest::Approx(w.integral()).epsilon(1e-14));
    CHECK(r.sup_norm() == doctest::Approx(w.sup_norm()).epsilon(1e-14));
    CHECK_THROWS(w.refined(1));
}

TEST_CASE("affine combination on mismatched grids") {
    const Path w(1, {0.0, 1.0, 0.0});
    const Path z(3, std::vector<double>(9, 2.0));
    const Path s = affine(2.0, w, 0.5, z);
    CHECK(s.level() == 3);
    CHECK(s.value_at(0.5) == doctest::Approx(3.0));
    CHECK(s.value_at(0.0) == doctest::Approx(1.0));
}

TEST_CASE("json round trip") {
    const Path w(2, {0.0, 0.25, -1.5, 3.0, 0.125});
    const Path back = Path::from_json(w.to_json());
    CHECK(back.level() == w.level());
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(back[i] == w[i]);
}

TEST_CASE("csv emission has header and rows") {
    const Path w(1, {0.0, 1.0, 0.0});
    std::ostringstream os;
    w.write_csv(os);
    const std::string text = os.str();
    CHECK(text.rfind("t,w", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
