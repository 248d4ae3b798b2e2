// SPDX-License-Identifier: Apache-2.0
#include "oustein/stein.hpp"

#include <cmath>
#include <stdexcept>

#include "engine.hpp"
#include "oustein/report.hpp"
#include "oustein/rng.hpp"
#include "oustein/semigroup.hpp"

namespace oustein {

namespace {

double require_mean(const Functional& g) {
    const auto& m = g.info().mean_under_Z;
    if (!m)
        throw std::invalid_argument(
            g.name() + ": mean_under_Z must be declared (no silent centering)");
    return *m;
}

/// Tail of -int_{u_max}^inf T_u g du, bounded through the Lipschitz-type
/// condition: |T_u g(w)| <= C_g e^{-u} E[(1+2||w||^2+3||Z||^2)(||w||+||Z||)].
double tail_envelope(const Functional& g, const Path& w, double u_max) {
    const double cg = g.info().C_g.value_or(std::max(1.0, g.info().L_bound));
    const SupNormMoments& m = brownian_sup_moments();
    const double wn = w.sup_norm();
    const double k = (1.0 + 2.0 * wn * wn) * (wn + m.m1) + 3.0 * m.m2 * wn +
                     3.0 * m.m3;
    return cg * std::exp(-u_max) * k;
}

/// int_rule e^{-ku} E D^k g(w e^{-u} + sigma(u) Z)[h(,h)] du with one shared
/// Z stream across nodes (positive orientation).
MCEstimate deriv_integral(const Functional& g, const Path& w, const Path& h,
                          int order, const PanelRule& rule, const MCSpec& mc) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("derivative order must be 1 or 2");
    if (!g.has_derivatives())
        throw DerivativesUnavailable(g.name() + ": operator inapplicable");
    const std::size_t m = rule.size();
    std::vector<double> av(m), bv(m), ev(m);
    for (std::size_t j = 0; j < m; ++j) {
        av[j] = std::exp(-rule.nodes[j]);
        bv[j] = sigma(rule.nodes[j]);
        ev[j] = rule.weights[j] * (order == 1 ? av[j] : av[j] * av[j]);
    }
    std::vector<double> buf;
    if (const auto& ls = g.linear_stat()) {
        detail::StatStream stream(*ls, mc.level);
        const double sw = ls->stat(w);
        const double sh = ls->stat(h);
        const double hfac = order == 1 ? sh : sh * sh;
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const double si = stream(mc.seed, i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double sp = av[j] * sw + bv[j] * si;
                acc += ev[j] * (order == 1 ? ls->dq(sp) : ls->ddq(sp));
            }
            return acc * hfac;
        });
    } else {
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const Path z = detail::sample_path(mc.level, mc.seed, i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const Path pushed = affine(av[j], w, bv[j], z);
                acc += ev[j] * (order == 1 ? g.grad_dir(pushed, h)
                                           : g.hess_dir(pushed, h, h));
            }
            return acc;
        });
    }
    return summarize(buf, mc.seed);
}

/// int_rule e^{-2u} E sum_{k<2^{J+1}} D2 g(push)[S_k,S_k] du (positive
/// orientation) -- the Schauder-series part of the operator pushed through
/// the derivative exchange.
MCEstimate hess_series_integral(const Functional& g, const Path& w,
                                const PanelRule& rule, const MCSpec& mc,
                                int j_trunc) {
    if (!g.has_derivatives())
        throw DerivativesUnavailable(g.name() + ": operator inapplicable");
    const std::size_t m = rule.size();
    std::vector<double> av(m), bv(m), ev(m);
    for (std::size_t j = 0; j < m; ++j) {
        av[j] = std::exp(-rule.nodes[j]);
        bv[j] = sigma(rule.nodes[j]);
        ev[j] = rule.weights[j] * av[j] * av[j];
    }
    std::vector<double> buf;
    if (const auto& ls = g.linear_stat()) {
        detail::StatStream series(*ls, j_trunc);
        const double parseval = series.parseval_sum();
        detail::StatStream stream(*ls, mc.level);
        const double sw = ls->stat(w);
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const double si = stream(mc.seed, i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                acc += ev[j] * ls->ddq(av[j] * sw + bv[j] * si);
            return acc * parseval;
        });
        return summarize(buf, mc.seed);
    }
    const SchauderTable& table = SchauderTable::cached(j_trunc);
    if (g.constant_hessian()) {
        double q = 0.0;
        for (std::size_t k = 0; k < table.size(); ++k)
            q += g.hess_dir(w, table[k], table[k]);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += ev[j];
        return MCEstimate{acc * q, 0.0, mc.n, mc.seed};
    }
    fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
        const Path z = detail::sample_path(mc.level, mc.seed, i);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const Path pushed = affine(av[j], w, bv[j], z);
            double sum_k = 0.0;
            for (std::size_t k = 0; k < table.size(); ++k)
                sum_k += g.hess_dir(pushed, table[k], table[k]);
            acc += ev[j] * sum_k;
        }
        return acc;
    });
    return summarize(buf, mc.seed);
}

/// A(int_rule T_u g du)(w) split into its two terms, each with its own
/// standard error.
struct AppliedOperator {
    MCEstimate grad_term; // D(int T_u g)(w)[w]
    MCEstimate hess_term; // sum_k D2(int T_u g)(w)[S_k,S_k]
    double value() const { return -grad_term.mean + hess_term.mean; }
    double stderr_() const {
        return std::sqrt(grad_term.stderr_ * grad_term.stderr_ +
                         hess_term.stderr_ * hess_term.stderr_);
    }
};

AppliedOperator apply_operator_to_integral(const Functional& g, const Path& w,
                                           const PanelRule& rule,
                                           const MCSpec& mc, int j_trunc) {
    return AppliedOperator{deriv_integral(g, w, w, 1, rule, mc),
                           hess_series_integral(g, w, rule, mc, j_trunc)};
}

} // namespace

nlohmann::json SteinReport::to_json() const {
    nlohmann::json j{{"value", jnum(value)},
                     {"stderr", jnum(stderr_)},
                     {"tail_bound", jnum(tail_bound)},
                     {"tolerance", jnum(tolerance)},
                     {"truncation_level", truncation_level},
                     {"pass", pass},
                     {"what", what}};
    if (residual) j["residual"] = jnum(*residual);
    return j;
}

double stein_operator_series(const Functional& f, const Path& w, int j_trunc) {
    if (!f.has_derivatives())
        throw DerivativesUnavailable(f.name() + ": operator inapplicable");
    if (const auto& ls = f.linear_stat()) {
        detail::StatStream series(*ls, j_trunc);
        const double sw = ls->stat(w);
        return -ls->dq(sw) * sw + ls->ddq(sw) * series.parseval_sum();
    }
    const SchauderTable& table = SchauderTable::cached(j_trunc);
    double acc = -f.grad_dir(w, w);
    for (std::size_t k = 0; k < table.size(); ++k)
        acc += f.hess_dir(w, table[k], table[k]);
    return acc;
}

MCEstimate stein_operator_mc(const Functional& f, const Path& w,
                             const MCSpec& mc) {
    if (!f.has_derivatives())
        throw DerivativesUnavailable(f.name() + ": operator inapplicable");
    std::vector<double> buf;
    double grad_term;
    if (const auto& ls = f.linear_stat()) {
        detail::StatStream stream(*ls, mc.level);
        const double sw = ls->stat(w);
        grad_term = ls->dq(sw) * sw;
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const double si = stream(mc.seed, i);
            return ls->ddq(sw) * si * si;
        });
    } else {
        grad_term = f.grad_dir(w, w);
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const Path z = detail::sample_path(mc.level, mc.seed, i);
            return f.hess_dir(w, z, z);
        });
    }
    MCEstimate est = summarize(buf, mc.seed);
    est.mean -= grad_term;
    return est;
}

SteinReport stein_solution(const Functional& g, const Path& w,
                           const QuadratureSpec& quad, double tolerance) {
    const double mu = require_mean(g);
    const PanelRule rule = composite_gauss_legendre(0.0, quad.u_max, quad.panels,
                                                    quad.nodes_per_panel);
    const MCSpec& mc = quad.mc;
    const std::size_t m = rule.size();
    std::vector<double> av(m), bv(m);
    for (std::size_t j = 0; j < m; ++j) {
        av[j] = std::exp(-rule.nodes[j]);
        bv[j] = sigma(rule.nodes[j]);
    }
    std::vector<double> buf;
    if (const auto& ls = g.linear_stat()) {
        detail::StatStream stream(*ls, mc.level);
        const double sw = ls->stat(w);
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const double si = stream(mc.seed, i);
            const double center = ls->q(si) - mu;
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                acc += rule.weights[j] * (ls->q(av[j] * sw + bv[j] * si) - center);
            return -acc;
        });
    } else {
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const Path z = detail::sample_path(mc.level, mc.seed, i);
            const double center = g(z) - mu;
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                acc += rule.weights[j] * (g(affine(av[j], w, bv[j], z)) - center);
            return -acc;
        });
    }
    const MCEstimate est = summarize(buf, mc.seed);
    SteinReport report;
    report.value = est.mean;
    report.stderr_ = est.stderr_;
    report.tail_bound = tail_envelope(g, w, quad.u_max);
    report.tolerance = tolerance;
    report.pass = report.tail_bound <= tolerance * (1.0 + std::abs(est.mean));
    report.what = "stein_solution(" + g.name() + ")";
    return report;
}

double stein_solution_derivative(const Functional& g, const Path& w,
                                 const Path& h, int order,
                                 const QuadratureSpec& quad) {
    require_mean(g);
    const PanelRule rule = composite_gauss_legendre(0.0, quad.u_max, quad.panels,
                                                    quad.nodes_per_panel);
    return -deriv_integral(g, w, h, order, rule, quad.mc).mean;
}

SteinReport stein_residual(const Functional& g, const Path& w,
                           const QuadratureSpec& quad, int j_trunc,
                           double tolerance) {
    require_mean(g);
    const PanelRule rule = composite_gauss_legendre(0.0, quad.u_max, quad.panels,
                                                    quad.nodes_per_panel);
    // A phi(g) = -A(int_0^{u_max} T_u g du)
    const AppliedOperator op =
        apply_operator_to_integral(g, w, rule, quad.mc, j_trunc);
    const double gw = g(w);
    const double a_phi = -op.value();
    SteinReport report;
    report.value = a_phi;
    report.residual = a_phi - gw;
    report.stderr_ = op.stderr_();
    report.tail_bound = tail_envelope(g, w, quad.u_max);
    report.tolerance = tolerance;
    report.truncation_level = j_trunc;
    report.pass = std::abs(*report.residual) <=
                  tolerance * (1.0 + std::abs(gw)) + 4.0 * report.stderr_;
    report.what = "stein_residual(" + g.name() + ")";
    return report;
}

SteinReport lemma3_check(const Functional& g, const Path& w, double t,
                         const QuadratureSpec& quad, int j_trunc,
                         double tolerance) {
    if (!(t > 0.0)) throw std::invalid_argument("lemma3_check: t must be > 0");
    const MCEstimate tg = semigroup_apply(g, t, w, quad.mc);
    const double lhs = tg.mean - g(w);
    const PanelRule rule =
        composite_gauss_legendre(0.0, t, quad.panels, quad.nodes_per_panel);
    const AppliedOperator op =
        apply_operator_to_integral(g, w, rule, quad.mc, j_trunc);
    const double rhs = op.value();
    SteinReport report;
    report.value = lhs;
    report.residual = lhs - rhs;
    report.stderr_ = std::sqrt(tg.stderr_ * tg.stderr_ +
                               op.stderr_() * op.stderr_());
    report.tolerance = tolerance;
    report.truncation_level = j_trunc;
    report.pass = std::abs(*report.residual) <=
                  tolerance * (1.0 + std::abs(lhs)) + 4.0 * report.stderr_;
    report.what = "lemma3(" + g.name() + ")";
    return report;
}

SteinReport ftc_check(const Functional& f, const Path& w, double r,
                      const QuadratureSpec& quad, int j_trunc,
                      double tolerance) {
    if (!(r > 0.0)) throw std::invalid_argument("ftc_check: r must be > 0");
    if (!f.has_derivatives())
        throw DerivativesUnavailable(f.name() + ": operator inapplicable");
    const MCSpec& mc = quad.mc;
    const MCEstimate tf = semigroup_apply(f, r, w, mc);
    const double lhs = tf.mean - f(w);
    const PanelRule rule =
        composite_gauss_legendre(0.0, r, quad.panels, quad.nodes_per_panel);
    const std::size_t m = rule.size();
    std::vector<double> av(m), bv(m);
    for (std::size_t j = 0; j < m; ++j) {
        av[j] = std::exp(-rule.nodes[j]);
        bv[j] = sigma(rule.nodes[j]);
    }
    std::vector<double> buf;
    if (const auto& ls = f.linear_stat()) {
        detail::StatStream series(*ls, j_trunc);
        const double parseval = series.parseval_sum();
        detail::StatStream stream(*ls, mc.level);
        const double sw = ls->stat(w);
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const double si = stream(mc.seed, i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double sp = av[j] * sw + bv[j] * si;
                acc += rule.weights[j] *
                       (-ls->dq(sp) * sp + ls->ddq(sp) * parseval);
            }
            return acc;
        });
    } else if (f.constant_hessian()) {
        // the Schauder series is independent of the base point
        const SchauderTable& table = SchauderTable::cached(j_trunc);
        double series_const = 0.0;
        for (std::size_t k = 0; k < table.size(); ++k)
            series_const += f.hess_dir(w, table[k], table[k]);
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const Path z = detail::sample_path(mc.level, mc.seed, i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const Path pushed = affine(av[j], w, bv[j], z);
                acc += rule.weights[j] *
                       (-f.grad_dir(pushed, pushed) + series_const);
            }
            return acc;
        });
    } else {
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            const Path z = detail::sample_path(mc.level, mc.seed, i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const Path pushed = affine(av[j], w, bv[j], z);
                acc += rule.weights[j] * stein_operator_series(f, pushed, j_trunc);
            }
            return acc;
        });
    }
    const MCEstimate rhs = summarize(buf, mc.seed);
    SteinReport report;
    report.value = lhs;
    report.residual = lhs - rhs.mean;
    report.stderr_ = std::sqrt(tf.stderr_ * tf.stderr_ +
                               rhs.stderr_ * rhs.stderr_);
    report.tolerance = tolerance;
    report.truncation_level = j_trunc;
    report.pass = std::abs(*report.residual) <=
                  tolerance * (1.0 + std::abs(lhs)) + 4.0 * report.stderr_;
    report.what = "ftc(" + f.name() + ")";
    return report;
}

nlohmann::json GrowthReport::to_json() const {
    nlohmann::json norms_j = nlohmann::json::array();
    nlohmann::json ratios_j = nlohmann::json::array();
    for (double v : norms) norms_j.push_back(jnum(v));
    for (double v : ratios) ratios_j.push_back(jnum(v));
    return nlohmann::json{{"norms", norms_j},
                          {"ratios", ratios_j},
                          {"max_ratio", jnum(max_ratio)},
                          {"bounded", bounded}};
}

GrowthReport growth_probe(const Functional& g, std::span<const Path> w_set,
                          const QuadratureSpec& quad) {
    const double mu = require_mean(g);
    const PanelRule rule = composite_gauss_legendre(0.0, quad.u_max, quad.panels,
                                                    quad.nodes_per_panel);
    const MCSpec& mc = quad.mc;
    const std::size_t m = rule.size();
    std::vector<double> av(m), bv(m);
    for (std::size_t j = 0; j < m; ++j) {
        av[j] = std::exp(-rule.nodes[j]);
        bv[j] = sigma(rule.nodes[j]);
    }
    GrowthReport report;
    const auto& ls = g.linear_stat();
    // shared Z statistics across every w and node
    std::vector<double> s_cache, center_cache;
    if (ls) {
        detail::StatStream stream(*ls, mc.level);
        fill_samples(s_cache, mc.n, mc.exec,
                     [&](std::size_t i) { return stream(mc.seed, i); });
        center_cache.resize(mc.n);
        for (std::size_t i = 0; i < mc.n; ++i)
            center_cache[i] = ls->q(s_cache[i]) - mu;
    }
    std::vector<double> buf(mc.n);
    for (const Path& w : w_set) {
        const double wn = w.sup_norm();
        double integral_abs = 0.0;
        if (ls) {
            const double sw = ls->stat(w);
            for (std::size_t j = 0; j < m; ++j) {
                fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
                    return ls->q(av[j] * sw + bv[j] * s_cache[i]) -
                           center_cache[i];
                });
                integral_abs +=
                    rule.weights[j] * std::abs(summarize(buf, mc.seed).mean);
            }
        } else {
            for (std::size_t j = 0; j < m; ++j) {
                fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
                    const Path z = detail::sample_path(mc.level, mc.seed, i);
                    return g(affine(av[j], w, bv[j], z)) - (g(z) - mu);
                });
                integral_abs +=
                    rule.weights[j] * std::abs(summarize(buf, mc.seed).mean);
            }
        }
        report.norms.push_back(wn);
        report.ratios.push_back(integral_abs / (1.0 + wn * wn * wn));
    }
    for (double r : report.ratios) report.max_ratio = std::max(report.max_ratio, r);
    // flag only a clear upward trend from the first to the last probe path
    if (report.ratios.size() >= 2 &&
        report.ratios.back() > report.ratios.front() + 0.1 * report.max_ratio &&
        report.norms.back() > report.norms.front())
        report.bounded = false;
    return report;
}

nlohmann::json LipschitzReport::to_json() const {
    nlohmann::json j{{"worst_ratio", jnum(worst_ratio)},
                     {"declared_c", jnum(declared_c)},
                     {"pairs", pairs},
                     {"pass", pass}};
    if (witness_norms)
        j["witness_norms"] = {jnum(witness_norms->first),
                              jnum(witness_norms->second)};
    return j;
}

LipschitzReport lipschitz_probe(const Functional& g, std::size_t n_pairs,
                                std::uint64_t seed) {
    if (!g.info().C_g)
        throw std::invalid_argument(g.name() + ": C_g not declared");
    constexpr int level = 4;
    LipschitzReport report;
    report.declared_c = *g.info().C_g;
    report.pairs = n_pairs;
    for (std::size_t p = 0; p < n_pairs; ++p) {
        const double u0 = to_unit_open(counter_hash(seed, p, 1000));
        const double u1 = to_unit_open(counter_hash(seed, p, 1001));
        Path w = Path::zero(level);
        Path x = Path::zero(level);
        switch (p % 4) {
            case 0:
                w = sample_brownian(level, seed, 2 * p).path;
                x = sample_brownian(level, seed, 2 * p + 1).path;
                break;
            case 1:
                w = affine(0.5 + 3.0 * u0, sample_brownian(level, seed, 2 * p).path,
                           0.0, Path::zero(level + 1));
                x = sample_brownian(level, seed, 2 * p + 1).path;
                break;
            case 2:
                w = sample_brownian(level, seed, 2 * p).path;
                x = Path::constant(20.0 * u0 - 10.0, level);
                break;
            default:
                w = Path::constant(2000.0 * u0 - 1000.0, level);
                x = Path::constant(2000.0 * u1 - 1000.0, level);
                break;
        }
        const Path diff = affine(1.0, w, -1.0, x);
        const double dn = diff.sup_norm();
        if (dn == 0.0) continue;
        const double wn = w.sup_norm(), xn = x.sup_norm();
        const double ratio =
            std::abs(g(w) - g(x)) / ((1.0 + wn * wn + xn * xn) * dn);
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.witness_norms = {wn, xn};
        }
    }
    report.pass = report.worst_ratio <= report.declared_c * (1.0 + 1e-9);
    return report;
}

} // namespace oustein
