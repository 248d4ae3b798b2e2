// SPDX-License-Identifier: Apache-2.0
#include "oustein/suite.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "oustein/counterexample.hpp"
#include "oustein/functionals.hpp"
#include "oustein/report.hpp"
#include "oustein/rng.hpp"
#include "oustein/schauder.hpp"
#include "oustein/semigroup.hpp"
#include "oustein/stein.hpp"

namespace oustein {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return counter_hash(seed, a, b);
}

std::vector<Path> random_paths(std::uint64_t seed, int level, std::size_t count) {
    std::vector<Path> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j)
        out.push_back(sample_brownian(level, seed, j).path);
    return out;
}

struct ClosedFormCase {
    Functional g;
    // exact phi(g)(w) and closed-form growth-ratio envelope at constants
    double (*phi)(const Path&);
    double (*growth)(double c, double u_max);
};

std::vector<ClosedFormCase> closed_form_cases() {
    return {
        {terminal_linear(),
         [](const Path& w) { return -w.terminal(); },
         [](double c, double u) { return c * (1.0 - std::exp(-u)) / (1.0 + c * c * c); }},
        {terminal_square(),
         [](const Path& w) {
             const double t = w.terminal();
             return -(t * t - 1.0) / 2.0;
         },
         [](double c, double u) {
             return (c * c - 1.0) * (1.0 - std::exp(-2.0 * u)) / 2.0 /
                    (1.0 + c * c * c);
         }},
        {integral_square(),
         [](const Path& w) {
             const double s = w.integral();
             return -(s * s - 1.0 / 3.0) / 2.0;
         },
         [](double c, double u) {
             return (c * c - 1.0 / 3.0) * (1.0 - std::exp(-2.0 * u)) / 2.0 /
                    (1.0 + c * c * c);
         }},
    };
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

nlohmann::json mini_battery(std::uint64_t seed, Exec exec) {
    MCSpec mc{.n = 20000, .level = 6, .seed = seed, .crn = true, .exec = exec};
    const Path w = Path::constant(2.0, 6);
    const MCEstimate sg = semigroup_apply(terminal_square(), 0.5, w, mc);
    QuadratureSpec quad{.u_max = 20.0, .panels = 16, .nodes_per_panel = 4,
                        .mc = MCSpec{.n = 5000, .level = 6, .seed = seed,
                                     .crn = true, .exec = exec}};
    const SteinReport sol = stein_solution(terminal_square(), w, quad);
    const MCEstimate gr =
        gap_ratio(3, MCSpec{.n = 5000, .level = 6, .seed = seed, .crn = true,
                            .exec = exec});
    return nlohmann::json{{"semigroup", {jnum(sg.mean), jnum(sg.stderr_)}},
                          {"stein_solve", {jnum(sol.value), jnum(sol.stderr_)}},
                          {"gap_ratio", {jnum(gr.mean), jnum(gr.stderr_)}}};
}

} // namespace

nlohmann::json run_suite(const SuiteOptions& opts) {
    std::vector<CriterionResult> results;
    const std::uint64_t seed = opts.seed;
    const auto cases = closed_form_cases();
    constexpr std::size_t kPaths = 20;
    constexpr int kLevel = 6;
    constexpr int kTrunc = 8;

    auto make_quad = [&](std::uint64_t s) {
        return QuadratureSpec{.u_max = 20.0, .panels = 64, .nodes_per_panel = 8,
                              .mc = MCSpec{.n = 100000, .level = kLevel,
                                           .seed = s, .crn = true,
                                           .exec = Exec::Parallel}};
    };

    // 1. closed-form Stein solutions
    {
        Timer timer;
        bool pass = true;
        double worst = 0.0;
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const QuadratureSpec quad = make_quad(derive(seed, 1, c));
            const auto paths = random_paths(derive(seed, 100, c), kLevel, kPaths);
            for (const Path& w : paths) {
                const double target = cases[c].phi(w);
                const SteinReport r = stein_solution(cases[c].g, w, quad);
                const double err =
                    std::abs(r.value - target) / (1.0 + std::abs(target));
                worst = std::max(worst, err);
                if (err > 0.02) pass = false;
            }
        }
        results.push_back({1, "closed-form Stein solutions", pass,
                           {{"worst_scaled_error", jnum(worst)},
                            {"tolerance", 0.02},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 2. Stein-equation residual A phi(g) = g
    {
        Timer timer;
        bool pass = true;
        double worst = 0.0;
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const QuadratureSpec quad = make_quad(derive(seed, 2, c));
            const auto paths = random_paths(derive(seed, 100, c), kLevel, kPaths);
            for (const Path& w : paths) {
                const SteinReport r =
                    stein_residual(cases[c].g, w, quad, kTrunc);
                const double scaled = std::abs(*r.residual) /
                                      (1.0 + std::abs(cases[c].g(w)));
                worst = std::max(worst, scaled);
                if (scaled > 0.02) pass = false;
            }
        }
        results.push_back({2, "Stein-equation residual", pass,
                           {{"worst_scaled_residual", jnum(worst)},
                            {"tolerance", 0.02},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 3. finite-t identity T_t g - g = A(int_0^t T_u g du)
    {
        Timer timer;
        bool pass = true;
        double worst = 0.0;
        const double ts[] = {0.1, 1.0, 5.0};
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const QuadratureSpec quad = make_quad(derive(seed, 3, c));
            const Path w = sample_brownian(kLevel, derive(seed, 103, c), 0).path;
            for (double t : ts) {
                const SteinReport r = lemma3_check(cases[c].g, w, t, quad, kTrunc);
                const double scaled =
                    std::abs(*r.residual) / (1.0 + std::abs(r.value));
                worst = std::max(worst, scaled);
                if (scaled > 0.02) pass = false;
            }
        }
        results.push_back({3, "finite-t semigroup identity", pass,
                           {{"worst_scaled_residual", jnum(worst)},
                            {"tolerance", 0.02},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 4. fundamental-theorem identity T_r f - f = int_0^r T_s A f ds
    {
        Timer timer;
        bool pass = true;
        double worst = 0.0;
        const Functional fs[] = {scaled(terminal_square(), -0.5),
                                 terminal_linear()};
        const double rs[] = {0.1, 1.0};
        std::size_t c = 0;
        for (const Functional& f : fs) {
            const QuadratureSpec quad = make_quad(derive(seed, 4, c));
            const Path w = sample_brownian(kLevel, derive(seed, 104, c), 0).path;
            for (double r : rs) {
                const SteinReport rep = ftc_check(f, w, r, quad, kTrunc);
                const double scaled =
                    std::abs(*rep.residual) / (1.0 + std::abs(rep.value));
                worst = std::max(worst, scaled);
                if (scaled > 0.02) pass = false;
            }
            ++c;
        }
        results.push_back({4, "fundamental-theorem identity", pass,
                           {{"worst_scaled_residual", jnum(worst)},
                            {"tolerance", 0.02},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 5. counterexample: norm gap persists while pointwise gaps vanish
    {
        Timer timer;
        bool pass = true;
        nlohmann::json details;
        double worst_det = 0.0;
        for (int k = 1; k <= 100; ++k)
            worst_det = std::max(worst_det, std::abs(deterministic_gap(k) - 1.0));
        if (worst_det > 1e-12) pass = false;
        details["worst_deterministic_gap_error"] = jnum(worst_det);

        nlohmann::json floors_j;
        std::ifstream fx(opts.fixture_dir + "/counterexample_floors.json");
        if (!fx) {
            pass = false;
            details["error"] = "fixture counterexample_floors.json not found";
        } else {
            fx >> floors_j;
            const MCSpec mc{.n = 100000, .level = 6, .seed = derive(seed, 5, 0),
                            .crn = true, .exec = Exec::Parallel};
            nlohmann::json ratios = nlohmann::json::array();
            for (int k = 4; k <= 8; ++k) {
                const MCEstimate est = gap_ratio(k, mc);
                const double floor =
                    floors_j.at("floors").at(std::to_string(k)).get<double>();
                ratios.push_back({{"k", k},
                                  {"ratio", jnum(est.mean)},
                                  {"floor", jnum(floor)}});
                if (est.mean < floor) pass = false;
            }
            details["gap_ratios"] = ratios;
        }

        const MCSpec mc{.n = 100000, .level = 6, .seed = derive(seed, 5, 1),
                        .crn = true, .exec = Exec::Parallel};
        const double u_small[] = {1e-1, 1e-2, 1e-3, 1e-4};
        const Path w = Path::constant(kPi / 2.0, 6);
        // weighted like the gap_ratio rows: |T_u f(w) - f(w)| / (1 + ||w||^3)
        const double wd = 1.0 + std::pow(w.sup_norm(), 3.0);
        const auto gaps = pointwise_gap(counterexample_functional(), w, u_small, mc);
        details["pointwise_gap_at_1e-4"] = jnum(gaps.back().mean / wd);
        if (gaps.back().mean / wd > 0.05) pass = false;
        details["seconds"] = jnum(timer.seconds());
        results.push_back({5, "strong-continuity counterexample", pass, details});
    }

    // 6. basis correctness at J = 8
    {
        Timer timer;
        bool pass = true;
        constexpr int J = 8;
        const std::size_t count = basis_count(J);   // 512
        const std::size_t cells = std::size_t{1} << (J + 1);
        // Haar orthonormality, midpoint-exact for piecewise-constant integrands
        std::vector<std::vector<double>> hv(count);
        for (std::size_t k = 1; k < count; ++k) {
            hv[k].resize(cells);
            for (std::size_t c = 0; c < cells; ++c)
                hv[k][c] = haar(k, (static_cast<double>(c) + 0.5) /
                                       static_cast<double>(cells));
        }
        double worst_ortho = 0.0;
        const double h = 1.0 / static_cast<double>(cells);
        for (std::size_t j = 1; j < count; ++j)
            for (std::size_t k = j; k < count; ++k) {
                double dot = 0.0;
                for (std::size_t c = 0; c < cells; ++c) dot += hv[j][c] * hv[k][c];
                dot *= h;
                worst_ortho =
                    std::max(worst_ortho, std::abs(dot - (j == k ? 1.0 : 0.0)));
            }
        if (worst_ortho > 1e-12) pass = false;

        // Parseval: sum_k S_k(s) S_k(t) = min(s,t) at level <= J nodes
        const SchauderTable& table = SchauderTable::cached(J);
        const std::size_t nodes = (std::size_t{1} << J) + 1;
        std::vector<std::vector<double>> sv(count, std::vector<double>(nodes));
        for (std::size_t k = 0; k < count; ++k)
            for (std::size_t i = 0; i < nodes; ++i)
                sv[k][i] = table[k][2 * i];
        double worst_cov = 0.0;
        for (std::size_t a = 0; a < nodes; ++a)
            for (std::size_t b = a; b < nodes; ++b) {
                double dot = 0.0;
                for (std::size_t k = 0; k < count; ++k) dot += sv[k][a] * sv[k][b];
                const double expect =
                    static_cast<double>(a) / static_cast<double>(nodes - 1);
                worst_cov = std::max(worst_cov, std::abs(dot - expect));
            }
        if (worst_cov > 1e-12) pass = false;

        double parseval_int = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            const double s = table[k].integral();
            parseval_int += s * s;
        }
        const double int_gap = std::abs(parseval_int - 1.0 / 3.0);
        if (int_gap > std::pow(4.0, -J)) pass = false;

        results.push_back({6, "basis correctness", pass,
                           {{"worst_orthonormality", jnum(worst_ortho)},
                            {"worst_covariance", jnum(worst_cov)},
                            {"integral_parseval_gap", jnum(int_gap)},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 7. sampler statistics
    {
        Timer timer;
        bool pass = true;
        const MCSpec mc{.n = 100000, .level = 6, .seed = derive(seed, 7, 0),
                        .crn = true, .exec = Exec::Parallel};
        std::vector<double> sq(mc.n), cross(mc.n);
        const std::size_t grid_n = (std::size_t{1} << (mc.level + 1)) + 1;
        const std::size_t i14 = (grid_n - 1) / 4, i34 = 3 * (grid_n - 1) / 4;
#pragma omp parallel
        {
            std::vector<double> xi(basis_count(mc.level)), grid(grid_n);
#pragma omp for schedule(static)
            for (long long i = 0; i < static_cast<long long>(mc.n); ++i) {
                brownian_coefficients(mc.level, mc.seed,
                                      static_cast<std::uint64_t>(i), xi);
                synthesize_brownian(xi, mc.level, grid);
                sq[i] = grid.back() * grid.back();
                cross[i] = grid[i14] * grid[i34];
            }
        }
        const MCEstimate var1 = summarize(sq, mc.seed);
        const MCEstimate cov = summarize(cross, mc.seed);
        if (std::abs(var1.mean - 1.0) > 4.0 * var1.stderr_) pass = false;
        if (std::abs(cov.mean - 0.25) > 4.0 * cov.stderr_) pass = false;
        results.push_back({7, "sampler statistics", pass,
                           {{"var_z1", jnum(var1.mean)},
                            {"var_z1_stderr", jnum(var1.stderr_)},
                            {"cov_quarters", jnum(cov.mean)},
                            {"cov_quarters_stderr", jnum(cov.stderr_)},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 8. finite differences against exact derivatives
    {
        Timer timer;
        bool pass = true;
        double worst_g = 0.0, worst_h = 0.0;
        const Functional fns[] = {terminal_linear(), terminal_square(),
                                  integral_square(), terminal_cube()};
        std::size_t c = 0;
        for (const Functional& f : fns) {
            for (std::size_t j = 0; j < 10; ++j) {
                const int level = 4 + static_cast<int>(j % 5); // J <= 8
                const Path w =
                    sample_brownian(level, derive(seed, 8, 2 * j + c), 0).path;
                const Path hdir =
                    sample_brownian(level, derive(seed, 8, 2 * j + 1 + c), 0).path;
                const double eg = f.grad_dir(w, hdir);
                const double fg = fd_grad(f, w, hdir);
                const double eh = f.hess_dir(w, hdir, hdir);
                const double fh = fd_hess(f, w, hdir);
                const double dg = std::abs(fg - eg) / (1.0 + std::abs(eg));
                const double dh = std::abs(fh - eh) / (1.0 + std::abs(eh));
                worst_g = std::max(worst_g, dg);
                worst_h = std::max(worst_h, dh);
                if (dg > 1e-5 || dh > 1e-3) pass = false;
            }
            c += 100;
        }
        results.push_back({8, "derivative engine", pass,
                           {{"worst_grad_error", jnum(worst_g)},
                            {"worst_hess_error", jnum(worst_h)},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 9. Taylor remainder exponent
    {
        Timer timer;
        bool pass = true;
        std::vector<double> u_list;
        for (int j = 0; j <= 12; ++j)
            u_list.push_back(1e-1 * std::pow(10.0, -2.0 * j / 12.0));
        const Path w = Path::constant(2.0, 6);
        const MCSpec mc{.n = 200000, .level = 6, .seed = derive(seed, 9, 0),
                        .crn = true, .exec = Exec::Parallel};
        const RemainderFit cubic =
            taylor_remainder_probe(terminal_cube(), w, u_list, mc);
        if (cubic.below_noise_floor || cubic.slope < 1.4) pass = false;
        const RemainderFit quad_fit =
            taylor_remainder_probe(terminal_square(), w, u_list, mc);
        const RemainderFit lin_fit =
            taylor_remainder_probe(terminal_linear(), w, u_list, mc);
        if (!quad_fit.below_noise_floor || !lin_fit.below_noise_floor) pass = false;
        results.push_back({9, "Taylor remainder exponent", pass,
                           {{"cubic_slope", jnum(cubic.slope)},
                            {"cubic_k1", jnum(cubic.k1_estimate)},
                            {"quadratic_at_noise_floor", quad_fit.below_noise_floor},
                            {"affine_at_noise_floor", lin_fit.below_noise_floor},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 10. growth bound along large-norm constants
    {
        Timer timer;
        bool pass = true;
        double worst = 0.0;
        const double consts[] = {1.0, 10.0, 100.0, 1000.0};
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const QuadratureSpec quad = make_quad(derive(seed, 10, c));
            std::vector<Path> ws;
            for (double cv : consts) ws.push_back(Path::constant(cv, 2));
            const GrowthReport rep = growth_probe(cases[c].g, ws, quad);
            // compare against closed forms; monotone where the closed form is
            std::size_t first_mono = cases[c].g.name() == "terminal_square" ? 1 : 0;
            for (std::size_t j = 0; j < ws.size(); ++j) {
                const double cf = cases[c].growth(consts[j], quad.u_max);
                const double err = std::abs(rep.ratios[j] - cf) / (1.0 + cf);
                worst = std::max(worst, err);
                if (err > 0.02) pass = false;
                if (j > first_mono && rep.ratios[j] > rep.ratios[j - 1] + 1e-6)
                    pass = false;
            }
        }
        results.push_back({10, "growth bound", pass,
                           {{"worst_scaled_error", jnum(worst)},
                            {"tolerance", 0.02},
                            {"seconds", jnum(timer.seconds())}}});
    }

    // 11. determinism across runs and worker counts
    {
        Timer timer;
        const std::uint64_t s = derive(seed, 11, 0);
        const std::string serial = dump_report(mini_battery(s, Exec::Serial));
        const std::string parallel = dump_report(mini_battery(s, Exec::Parallel));
        const std::string repeat = dump_report(mini_battery(s, Exec::Parallel));
        const bool pass = serial == parallel && parallel == repeat;
        results.push_back({11, "determinism", pass,
                           {{"serial_equals_parallel", serial == parallel},
                            {"repeat_identical", parallel == repeat},
                            {"seconds", jnum(timer.seconds())}}});
    }

    nlohmann::json criteria = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"details", r.details}});
        all = all && r.pass;
    }
    return nlohmann::json{{"seed", seed}, {"criteria", criteria}, {"pass", all}};
}

bool suite_passed(const nlohmann::json& report) {
    return report.at("pass").get<bool>();
}

} // namespace oustein
