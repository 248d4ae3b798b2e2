// SPDX-License-Identifier: Apache-2.0
//
// oustein: numerical laboratory for the Ornstein-Uhlenbeck semigroup and the
// Stein equation on piecewise-linear Brownian paths.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oustein/counterexample.hpp"
#include "oustein/functionals.hpp"
#include "oustein/schauder.hpp"
#include "oustein/report.hpp"
#include "oustein/semigroup.hpp"
#include "oustein/stein.hpp"
#include "oustein/suite.hpp"

namespace {

using nlohmann::json;
using namespace oustein;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OUSTEIN_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ConfigError("OUSTEIN_SEED is not an integer: " + std::string(env));
        return v;
    }
    return 0;
}

Path parse_path_source(const std::string& src, int level) {
    if (src.rfind("const:", 0) == 0) {
        const std::string num = src.substr(6);
        char* end = nullptr;
        const double c = std::strtod(num.c_str(), &end);
        if (end == num.c_str() || *end != '\0')
            throw ConfigError("bad path literal: " + src);
        return Path::constant(c, level);
    }
    if (src.rfind("file:", 0) == 0) {
        const std::string file = src.substr(5);
        std::ifstream in(file);
        if (!in) throw ConfigError("cannot open path file: " + file);
        json j;
        in >> j;
        return Path::from_json(j);
    }
    throw ConfigError("path source must be const:<real> or file:<path>, got: " +
                      src);
}

/// Applies JSON config values for flags the user did not pass explicitly.
/// Flat keys only; every key must name a flag of the subcommand.
void apply_config(CLI::App* cmd, const std::string& config_file,
                  const std::map<std::string, std::function<void(const json&)>>&
                      setters) {
    if (config_file.empty()) return;
    std::ifstream in(config_file);
    if (!in) throw ConfigError("cannot open config file: " + config_file);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
    for (const auto& [key, value] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown config key: " + key);
        if (cmd->count("--" + key) > 0) continue; // flags override the file
        try {
            it->second(value);
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
}

struct Common {
    std::string config;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = default_seed();
    std::size_t n = 100000;
    int level = 6;
    bool serial = false;

    std::map<std::string, std::function<void(const json&)>> setters;

    void add_to(CLI::App* cmd, bool with_mc = true) {
        cmd->add_option("--config", config, "flat JSON config; flags override");
        cmd->add_option("--out", out, "output file (default stdout)");
        cmd->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--seed", seed, "RNG seed (env OUSTEIN_SEED fallback)");
        setters["out"] = [this](const json& v) { out = v.get<std::string>(); };
        setters["format"] = [this](const json& v) { format = v.get<std::string>(); };
        setters["seed"] = [this](const json& v) { seed = v.get<std::uint64_t>(); };
        if (with_mc) {
            cmd->add_option("--n", n, "Monte-Carlo sample count");
            cmd->add_option("--level", level, "Brownian truncation level J")
                ->check(CLI::Range(1, 14));
            cmd->add_flag("--serial", serial, "run the serial reference engine");
            setters["n"] = [this](const json& v) { n = v.get<std::size_t>(); };
            setters["level"] = [this](const json& v) { level = v.get<int>(); };
            setters["serial"] = [this](const json& v) { serial = v.get<bool>(); };
        }
    }

    MCSpec mc() const {
        return MCSpec{.n = n, .level = level, .seed = seed, .crn = true,
                      .exec = serial ? Exec::Serial : Exec::Parallel};
    }
};

struct QuadFlags {
    double u_max = 20.0;
    int panels = 64;
    int nodes = 8;

    void add_to(CLI::App* cmd, Common& common) {
        cmd->add_option("--umax", u_max, "quadrature cutoff u_max");
        cmd->add_option("--panels", panels, "quadrature panels");
        cmd->add_option("--nodes", nodes, "Gauss-Legendre nodes per panel");
        common.setters["umax"] = [this](const json& v) { u_max = v.get<double>(); };
        common.setters["panels"] = [this](const json& v) { panels = v.get<int>(); };
        common.setters["nodes"] = [this](const json& v) { nodes = v.get<int>(); };
    }

    QuadratureSpec spec(const Common& common) const {
        return QuadratureSpec{.u_max = u_max, .panels = panels,
                              .nodes_per_panel = nodes, .mc = common.mc()};
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Ornstein-Uhlenbeck semigroup and Stein-equation laboratory"};
    app.require_subcommand(1);

    // sample
    auto* c_sample = app.add_subcommand("sample", "draw one Brownian path");
    Common sample_c;
    std::uint64_t sample_index = 0;
    sample_c.add_to(c_sample);
    c_sample->add_option("--index", sample_index, "sample index within the stream");
    sample_c.setters["index"] = [&](const json& v) {
        sample_index = v.get<std::uint64_t>();
    };

    // semigroup-eval
    auto* c_semi = app.add_subcommand("semigroup-eval", "estimate (T_u f)(w)");
    Common semi_c;
    std::string semi_fn = "terminal_square", semi_path = "const:0";
    double semi_u = 1.0;
    semi_c.add_to(c_semi);
    c_semi->add_option("--functional", semi_fn, "functional name");
    c_semi->add_option("--u", semi_u, "semigroup time u >= 0");
    c_semi->add_option("--path", semi_path, "const:<real> or file:<path>");
    semi_c.setters["functional"] = [&](const json& v) {
        semi_fn = v.get<std::string>();
    };
    semi_c.setters["u"] = [&](const json& v) { semi_u = v.get<double>(); };
    semi_c.setters["path"] = [&](const json& v) {
        semi_path = v.get<std::string>();
    };

    // stein-solve
    auto* c_solve = app.add_subcommand("stein-solve", "estimate phi(g)(w)");
    Common solve_c;
    QuadFlags solve_q;
    std::string solve_g = "terminal_square", solve_path = "const:0";
    double solve_tol = 0.02;
    solve_c.add_to(c_solve);
    solve_q.add_to(c_solve, solve_c);
    c_solve->add_option("--g", solve_g, "centered functional name");
    c_solve->add_option("--path", solve_path, "const:<real> or file:<path>");
    c_solve->add_option("--tol", solve_tol, "tail tolerance");
    solve_c.setters["g"] = [&](const json& v) { solve_g = v.get<std::string>(); };
    solve_c.setters["path"] = [&](const json& v) {
        solve_path = v.get<std::string>();
    };
    solve_c.setters["tol"] = [&](const json& v) { solve_tol = v.get<double>(); };

    // stein-verify
    auto* c_verify =
        app.add_subcommand("stein-verify", "check A phi(g)(w) = g(w)");
    Common verify_c;
    QuadFlags verify_q;
    std::string verify_g = "terminal_square", verify_path = "const:0";
    int verify_jtrunc = 8;
    double verify_tol = 0.02;
    verify_c.add_to(c_verify);
    verify_q.add_to(c_verify, verify_c);
    c_verify->add_option("--g", verify_g, "centered functional name");
    c_verify->add_option("--path", verify_path, "const:<real> or file:<path>");
    c_verify->add_option("--jtrunc", verify_jtrunc, "Schauder truncation level");
    c_verify->add_option("--tol", verify_tol, "residual tolerance");
    verify_c.setters["g"] = [&](const json& v) { verify_g = v.get<std::string>(); };
    verify_c.setters["path"] = [&](const json& v) {
        verify_path = v.get<std::string>();
    };
    verify_c.setters["jtrunc"] = [&](const json& v) {
        verify_jtrunc = v.get<int>();
    };
    verify_c.setters["tol"] = [&](const json& v) { verify_tol = v.get<double>(); };

    // lemma3
    auto* c_lemma =
        app.add_subcommand("lemma3", "check T_t g - g = A(int_0^t T_u g du)");
    Common lemma_c;
    QuadFlags lemma_q;
    std::string lemma_g = "terminal_square", lemma_path = "const:0";
    double lemma_t = 1.0, lemma_tol = 0.02;
    int lemma_jtrunc = 8;
    lemma_c.add_to(c_lemma);
    lemma_q.add_to(c_lemma, lemma_c);
    c_lemma->add_option("--g", lemma_g, "functional name");
    c_lemma->add_option("--path", lemma_path, "const:<real> or file:<path>");
    c_lemma->add_option("--t", lemma_t, "finite horizon t > 0");
    c_lemma->add_option("--jtrunc", lemma_jtrunc, "Schauder truncation level");
    c_lemma->add_option("--tol", lemma_tol, "residual tolerance");
    lemma_c.setters["g"] = [&](const json& v) { lemma_g = v.get<std::string>(); };
    lemma_c.setters["path"] = [&](const json& v) {
        lemma_path = v.get<std::string>();
    };
    lemma_c.setters["t"] = [&](const json& v) { lemma_t = v.get<double>(); };
    lemma_c.setters["jtrunc"] = [&](const json& v) {
        lemma_jtrunc = v.get<int>();
    };
    lemma_c.setters["tol"] = [&](const json& v) { lemma_tol = v.get<double>(); };

    // ftc
    auto* c_ftc =
        app.add_subcommand("ftc", "check T_r f - f = int_0^r T_s A f ds");
    Common ftc_c;
    QuadFlags ftc_q;
    std::string ftc_f = "terminal_square", ftc_path = "const:0";
    double ftc_r = 1.0, ftc_tol = 0.02;
    int ftc_jtrunc = 8;
    ftc_c.add_to(c_ftc);
    ftc_q.add_to(c_ftc, ftc_c);
    c_ftc->add_option("--f", ftc_f, "functional name");
    c_ftc->add_option("--path", ftc_path, "const:<real> or file:<path>");
    c_ftc->add_option("--r", ftc_r, "finite horizon r > 0");
    c_ftc->add_option("--jtrunc", ftc_jtrunc, "Schauder truncation level");
    c_ftc->add_option("--tol", ftc_tol, "residual tolerance");
    ftc_c.setters["f"] = [&](const json& v) { ftc_f = v.get<std::string>(); };
    ftc_c.setters["path"] = [&](const json& v) {
        ftc_path = v.get<std::string>();
    };
    ftc_c.setters["r"] = [&](const json& v) { ftc_r = v.get<double>(); };
    ftc_c.setters["jtrunc"] = [&](const json& v) { ftc_jtrunc = v.get<int>(); };
    ftc_c.setters["tol"] = [&](const json& v) { ftc_tol = v.get<double>(); };

    // counterexample
    auto* c_counter = app.add_subcommand(
        "counterexample", "norm gap vs pointwise continuity along w_k");
    Common counter_c;
    int counter_kmax = 8;
    counter_c.n = 100000;
    counter_c.add_to(c_counter);
    c_counter->add_option("--kmax", counter_kmax, "witness indices 1..kmax")
        ->check(CLI::Range(1, 1000));
    counter_c.setters["kmax"] = [&](const json& v) {
        counter_kmax = v.get<int>();
        if (counter_kmax < 1 || counter_kmax > 1000)
            throw ConfigError("kmax out of range [1, 1000]");
    };

    // suite
    auto* c_suite =
        app.add_subcommand("suite", "run the full verification battery");
    Common suite_c;
    suite_c.seed = 7;
    std::string suite_fixtures = "tests/fixtures";
#ifdef OUSTEIN_FIXTURE_DIR
    suite_fixtures = OUSTEIN_FIXTURE_DIR;
#endif
    suite_c.add_to(c_suite, /*with_mc=*/false);
    c_suite->add_option("--fixtures", suite_fixtures, "fixture directory");
    suite_c.setters["fixtures"] = [&](const json& v) {
        suite_fixtures = v.get<std::string>();
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (c_sample->parsed()) {
        apply_config(c_sample, sample_c.config, sample_c.setters);
        const BrownianSample s =
            sample_brownian(sample_c.level, sample_c.seed, sample_index);
        json report{{"level", sample_c.level},
                    {"seed", sample_c.seed},
                    {"index", sample_index},
                    {"path", s.path.to_json()}};
        std::ostringstream csv;
        s.path.write_csv(csv);
        emit_report(report, sample_c.format, sample_c.out, csv.str());
        return 0;
    }
    if (c_semi->parsed()) {
        apply_config(c_semi, semi_c.config, semi_c.setters);
        if (semi_u < 0.0) throw ConfigError("--u must be >= 0");
        const Functional f = functional_by_name(semi_fn);
        const Path w = parse_path_source(semi_path, semi_c.level);
        const MCEstimate est = semigroup_apply(f, semi_u, w, semi_c.mc());
        emit_report(json{{"mean", jnum(est.mean)},
                         {"stderr", jnum(est.stderr_)},
                         {"n", est.n},
                         {"seed", est.seed}},
                    semi_c.format, semi_c.out);
        return 0;
    }
    if (c_solve->parsed()) {
        apply_config(c_solve, solve_c.config, solve_c.setters);
        const Functional g = functional_by_name(solve_g);
        const Path w = parse_path_source(solve_path, solve_c.level);
        const SteinReport r =
            stein_solution(g, w, solve_q.spec(solve_c), solve_tol);
        emit_report(r.to_json(), solve_c.format, solve_c.out);
        return r.pass ? 0 : 1;
    }
    if (c_verify->parsed()) {
        apply_config(c_verify, verify_c.config, verify_c.setters);
        const Functional g = functional_by_name(verify_g);
        const Path w = parse_path_source(verify_path, verify_c.level);
        const SteinReport r = stein_residual(g, w, verify_q.spec(verify_c),
                                             verify_jtrunc, verify_tol);
        emit_report(r.to_json(), verify_c.format, verify_c.out);
        return r.pass ? 0 : 1;
    }
    if (c_lemma->parsed()) {
        apply_config(c_lemma, lemma_c.config, lemma_c.setters);
        if (lemma_t <= 0.0) throw ConfigError("--t must be > 0");
        const Functional g = functional_by_name(lemma_g);
        const Path w = parse_path_source(lemma_path, lemma_c.level);
        const SteinReport r = lemma3_check(g, w, lemma_t, lemma_q.spec(lemma_c),
                                           lemma_jtrunc, lemma_tol);
        emit_report(r.to_json(), lemma_c.format, lemma_c.out);
        return r.pass ? 0 : 1;
    }
    if (c_ftc->parsed()) {
        apply_config(c_ftc, ftc_c.config, ftc_c.setters);
        if (ftc_r <= 0.0) throw ConfigError("--r must be > 0");
        const Functional f = functional_by_name(ftc_f);
        const Path w = parse_path_source(ftc_path, ftc_c.level);
        const SteinReport r = ftc_check(f, w, ftc_r, ftc_q.spec(ftc_c),
                                        ftc_jtrunc, ftc_tol);
        emit_report(r.to_json(), ftc_c.format, ftc_c.out);
        return r.pass ? 0 : 1;
    }
    if (c_counter->parsed()) {
        apply_config(c_counter, counter_c.config, counter_c.setters);
        std::vector<int> ks(counter_kmax);
        for (int k = 1; k <= counter_kmax; ++k) ks[k - 1] = k;
        const double u_small[] = {1e-1, 1e-2, 1e-3, 1e-4};
        const CounterexampleReport rep =
            counterexample_report(ks, u_small, counter_c.mc());
        std::ostringstream csv;
        rep.write_csv(csv);
        emit_report(rep.to_json(), counter_c.format, counter_c.out, csv.str());
        return 0;
    }
    if (c_suite->parsed()) {
        apply_config(c_suite, suite_c.config, suite_c.setters);
        const json report = run_suite(
            SuiteOptions{.seed = suite_c.seed, .fixture_dir = suite_fixtures});
        emit_report(report, suite_c.format, suite_c.out);
        return suite_passed(report) ? 0 : 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
