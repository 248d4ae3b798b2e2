// SPDX-License-Identifier: Apache-2.0
//
// Timing comparison of the serial reference engine against the OpenMP one.
// The two must agree bit-for-bit; this tool reports wall time and speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "oustein/counterexample.hpp"
#include "oustein/functionals.hpp"
#include "oustein/schauder.hpp"
#include "oustein/semigroup.hpp"
#include "oustein/stein.hpp"

using namespace oustein;

namespace {

template <class F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

MCSpec mc_for(Exec exec, std::size_t n, std::uint64_t seed) {
    return MCSpec{.n = n, .level = 8, .seed = seed, .crn = true, .exec = exec};
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
    const std::uint64_t seed = 42;
    brownian_sup_moments(); // warm the one-time caches outside the timings
    SchauderTable::cached(8);
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel",
                "speedup");

    const Functional g = terminal_square();
    const Path w = Path::constant(2.0, 8);
    {
        MCEstimate rs, rp;
        const double ts =
            timed([&] { rs = semigroup_apply(g, 0.5, w, mc_for(Exec::Serial, n, seed)); });
        const double tp =
            timed([&] { rp = semigroup_apply(g, 0.5, w, mc_for(Exec::Parallel, n, seed)); });
        row("semigroup_apply", ts, tp,
            rs.mean == rp.mean && rs.stderr_ == rp.stderr_);
    }
    {
        // generic Path route: no linear statistic on the counterexample f
        const Functional f = counterexample_functional();
        MCEstimate rs, rp;
        const std::size_t m = n / 10;
        const double ts =
            timed([&] { rs = semigroup_apply(f, 0.5, w, mc_for(Exec::Serial, m, seed)); });
        const double tp =
            timed([&] { rp = semigroup_apply(f, 0.5, w, mc_for(Exec::Parallel, m, seed)); });
        row("semigroup_apply (generic)", ts, tp,
            rs.mean == rp.mean && rs.stderr_ == rp.stderr_);
    }
    {
        SteinReport rs, rp;
        auto quad = [&](Exec exec) {
            return QuadratureSpec{.u_max = 20.0, .panels = 64,
                                  .nodes_per_panel = 8,
                                  .mc = mc_for(exec, n / 4, seed)};
        };
        const double ts = timed([&] { rs = stein_solution(g, w, quad(Exec::Serial)); });
        const double tp = timed([&] { rp = stein_solution(g, w, quad(Exec::Parallel)); });
        row("stein_solution", ts, tp,
            rs.value == rp.value && rs.stderr_ == rp.stderr_);
    }
    {
        MCEstimate rs, rp;
        const double ts = timed([&] { rs = gap_ratio(5, mc_for(Exec::Serial, n, seed)); });
        const double tp = timed([&] { rp = gap_ratio(5, mc_for(Exec::Parallel, n, seed)); });
        row("gap_ratio", ts, tp,
            rs.mean == rp.mean && rs.stderr_ == rp.stderr_);
    }
    return 0;
}
