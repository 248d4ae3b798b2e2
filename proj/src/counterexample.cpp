// SPDX-License-Identifier: Apache-2.0
#include "oustein/counterexample.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "oustein/functionals.hpp"
#include "oustein/report.hpp"
#include "oustein/schauder.hpp"
#include "oustein/semigroup.hpp"

namespace oustein {

namespace {

constexpr double kPi = std::numbers::pi;

double witness_u(int k) {
    // -log(1 - 1/(2k)); e^{-u_k} k pi = k pi - pi/2 exactly
    return -std::log1p(-1.0 / (2.0 * k));
}

/// Fills buf[i] = ||c0 + b Z_i|| for a constant base value c0.
void sup_push_samples(double c0, double b, const MCSpec& mc,
                      std::vector<double>& buf) {
    buf.resize(mc.n);
    const std::size_t coeffs = basis_count(mc.level);
    const std::size_t grid_n = (std::size_t{1} << (mc.level + 1)) + 1;
    const long long nn = static_cast<long long>(mc.n);
#pragma omp parallel if (mc.exec == Exec::Parallel)
    {
        std::vector<double> xi(coeffs), grid(grid_n);
#pragma omp for schedule(static)
        for (long long i = 0; i < nn; ++i) {
            brownian_coefficients(mc.level, mc.seed,
                                  static_cast<std::uint64_t>(i), xi);
            synthesize_brownian(xi, mc.level, grid);
            double m = 0.0;
            for (double z : grid) m = std::max(m, std::abs(c0 + b * z));
            buf[static_cast<std::size_t>(i)] = m;
        }
    }
}

} // namespace

Witness witness(int k, int level) {
    if (k < 1) throw std::invalid_argument("witness: k must be >= 1");
    return Witness{k, Path::constant(k * kPi, level), witness_u(k)};
}

double deterministic_gap(int k) {
    if (k < 1) throw std::invalid_argument("deterministic_gap: k must be >= 1");
    const double u = witness_u(k);
    const double norm = k * kPi;
    return std::abs(std::sin(std::exp(-u) * norm) - std::sin(norm));
}

double gap_ratio_surrogate(int k) {
    const double r0 = k * kPi;
    const double r1 = r0 - kPi / 2.0;
    return (1.0 + r1 * r1 * r1) / (1.0 + r0 * r0 * r0);
}

MCEstimate gap_ratio(int k, const MCSpec& mc) {
    if (k < 1) throw std::invalid_argument("gap_ratio: k must be >= 1");
    const double u = witness_u(k);
    const double norm = k * kPi;
    const double c0 = std::exp(-u) * norm; // = k pi - pi/2
    const double b = sigma(u);
    const double denom = 1.0 + norm * norm * norm;
    std::vector<double> sup(mc.n);
    sup_push_samples(c0, b, mc, sup);
    std::vector<double> vals(mc.n);
    for (std::size_t i = 0; i < mc.n; ++i) {
        const double m = sup[i];
        // f(w_k) = 0 exactly since sin(k pi) = 0
        vals[i] = (1.0 + m * m * m) * std::sin(m) / denom;
    }
    MCEstimate est = summarize(vals, mc.seed);
    est.mean = std::abs(est.mean);
    return est;
}

double cubic_term_envelope(double u, double w_norm) {
    const SupNormMoments& zm = brownian_sup_moments();
    const double e1 = std::exp(-u), e2 = e1 * e1;
    const double s = sigma(u);
    const double wn = w_norm;
    const double num =
        wn * wn * wn * (1.0 - e1) * (2.0 * e2 + e1 + 1.0) +
        wn * wn * zm.m1 * s * (2.0 * e2 + 2.0) +
        wn * s * s * zm.m2 * (2.0 * (1.0 - e1) + 1.0) +
        2.0 * s * s * s * zm.m3;
    return num / (1.0 + wn * wn * wn);
}

CounterexampleReport counterexample_report(std::span<const int> k_list,
                                           std::span<const double> u_small_list,
                                           const MCSpec& mc) {
    if (k_list.empty() || u_small_list.empty())
        throw std::invalid_argument("counterexample_report: empty probe lists");
    CounterexampleReport report;

    // (a) no decay along the witness sequence u_k -> 0
    for (int k : k_list) {
        const MCEstimate est = gap_ratio(k, mc);
        report.rows.push_back(CounterexampleRow{k, witness_u(k), est.mean,
                                                est.stderr_,
                                                gap_ratio_surrogate(k)});
    }

    // (b) pointwise continuity at a fixed path, in the same weighted units
    // as the gap_ratio rows: |T_u f(w) - f(w)| / (1 + ||w||^3)
    const Functional f = counterexample_functional();
    const Path w = Path::constant(kPi / 2.0, mc.level);
    const double wd = 1.0 + std::pow(w.sup_norm(), 3.0);
    report.u_small.assign(u_small_list.begin(), u_small_list.end());
    for (const MCEstimate& est : pointwise_gap(f, w, u_small_list, mc)) {
        report.pointwise_gaps.push_back(est.mean / wd);
        report.pointwise_stderr.push_back(est.stderr_ / wd);
    }

    // (c) the two vanishing terms of the decomposition, probed at w_3
    const double wn = 3.0 * kPi;
    std::vector<double> sup, vals(mc.n);
    for (double u : u_small_list) {
        const double e1 = std::exp(-u);
        const double b = sigma(u);
        sup_push_samples(e1 * wn, b, mc, sup);
        for (std::size_t i = 0; i < mc.n; ++i) {
            const double m = sup[i];
            vals[i] = (m * m * m - wn * wn * wn) * std::sin(m);
        }
        report.cubic_term_mc.push_back(
            std::abs(summarize(vals, mc.seed).mean) / (1.0 + wn * wn * wn));
        report.cubic_term_envelope.push_back(cubic_term_envelope(u, wn));
        for (std::size_t i = 0; i < mc.n; ++i) vals[i] = std::sin(sup[i]);
        report.sin_term_mc.push_back(
            std::abs(summarize(vals, mc.seed).mean - std::sin(e1 * wn)));
    }
    return report;
}

nlohmann::json CounterexampleReport::to_json() const {
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"k", r.k},
                          {"u", jnum(r.u)},
                          {"gap_ratio", jnum(r.ratio)},
                          {"stderr", jnum(r.stderr_)},
                          {"surrogate", jnum(r.surrogate)}});
    auto arr = [](const std::vector<double>& v) {
        nlohmann::json j = nlohmann::json::array();
        for (double x : v) j.push_back(jnum(x));
        return j;
    };
    return nlohmann::json{{"rows", rows_j},
                          {"u_small", arr(u_small)},
                          {"pointwise_gaps", arr(pointwise_gaps)},
                          {"pointwise_stderr", arr(pointwise_stderr)},
                          {"cubic_term_mc", arr(cubic_term_mc)},
                          {"cubic_term_envelope", arr(cubic_term_envelope)},
                          {"sin_term_mc", arr(sin_term_mc)}};
}

void CounterexampleReport::write_csv(std::ostream& os) const {
    os << "k,u_k,gap_ratio,stderr,surrogate\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g\n", r.k, r.u,
                      r.ratio, r.stderr_, r.surrogate);
        os << buf;
    }
}

} // namespace oustein
