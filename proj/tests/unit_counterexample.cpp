// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oustein/counterexample.hpp"
#include "oustein/functionals.hpp"
#include "oustein/semigroup.hpp"

using namespace oustein;

namespace {
MCSpec spec(std::size_t n, std::uint64_t seed) {
    return MCSpec{.n = n, .level = 6, .seed = seed, .crn = true,
                  .exec = Exec::Parallel};
}
constexpr double kPi = std::numbers::pi;
} // namespace

TEST_CASE("witness family geometry") {
    for (int k : {1, 2, 5, 20}) {
        const Witness wt = witness(k, 6);
        CHECK(wt.path.sup_norm() == doctest::Approx(k * kPi).epsilon(1e-15));
        // e^{-u_k} k pi = k pi - pi/2
        CHECK(std::exp(-wt.u) * k * kPi ==
              doctest::Approx(k * kPi - kPi / 2.0).epsilon(1e-14));
        CHECK(wt.u > 0.0);
    }
    CHECK(witness(2, 6).u < witness(1, 6).u); // u_k -> 0
    CHECK_THROWS(witness(0, 6));
}

TEST_CASE("deterministic gap equals one for all k") {
    for (int k = 1; k <= 100; ++k)
        CHECK(deterministic_gap(k) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("surrogate ratio approaches one") {
    CHECK(gap_ratio_surrogate(1) < gap_ratio_surrogate(5));
    CHECK(gap_ratio_surrogate(5) == doctest::Approx(0.729).epsilon(0.01));
    CHECK(gap_ratio_surrogate(1000) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("monte-carlo gap ratio stays bounded away from zero") {
    for (int k : {4, 6, 8}) {
        const MCEstimate est = gap_ratio(k, spec(20000, 55));
        CHECK(est.mean > 0.4);
        CHECK(est.mean < 1.1);
    }
}

TEST_CASE("pointwise gap vanishes at a fixed path") {
    const double u_list[] = {1e-1, 1e-2, 1e-3, 1e-4};
    const Path w = Path::constant(kPi / 2.0, 6);
    const auto gaps = pointwise_gap(counterexample_functional(), w,
                                    u_list, spec(20000, 56));
    CHECK(gaps.front().mean > gaps.back().mean);
    // weighted as in the report: the gap_ratio rows carry the same 1+||w||^3
    const double wd = 1.0 + std::pow(w.sup_norm(), 3.0);
    CHECK(gaps.back().mean / wd < 0.05);
}

TEST_CASE("cubic envelope dominates the measured cubic term") {
    const std::vector<int> ks = {3};
    const double us[] = {1e-1, 1e-2, 1e-3};
    const CounterexampleReport rep = counterexample_report(ks, us, spec(20000, 57));
    REQUIRE(rep.cubic_term_mc.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(rep.cubic_term_mc[j] <=
              rep.cubic_term_envelope[j] * (1.0 + 1e-9) + 1e-3);
        CHECK(rep.sin_term_mc[j] < 1.0);
    }
    // the envelope itself vanishes with u
    CHECK(rep.cubic_term_envelope[2] < rep.cubic_term_envelope[0]);
}

TEST_CASE("report serialization") {
    const std::vector<int> ks = {1, 2, 3};
    const double us[] = {1e-2};
    const CounterexampleReport rep = counterexample_report(ks, us, spec(2000, 58));
    const nlohmann::json j = rep.to_json();
    CHECK(j.at("rows").size() == 3);
    CHECK(j.at("pointwise_gaps").size() == 1);
    std::ostringstream os;
    rep.write_csv(os);
    const std::string text = os.str();
    CHECK(text.rfind("k,u_k,gap_ratio,stderr,surrogate", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("input validation") {
    CHECK_THROWS(deterministic_gap(0));
    CHECK_THROWS(gap_ratio(0, spec(10, 1)));
    const std::vector<int> none;
    const double us[] = {1e-2};
    CHECK_THROWS(counterexample_report(none, us, spec(10, 1)));
}
