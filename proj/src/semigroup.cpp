// SPDX-License-Identifier: Apache-2.0
#include "oustein/semigroup.hpp"

#include <cmath>
#include <stdexcept>

#include "engine.hpp"

namespace oustein {

double sigma(double u) {
    if (u < 0.0) throw std::invalid_argument("sigma: negative u");
    return std::sqrt(-std::expm1(-2.0 * u));
}

Path ou_push(const Path& w, double u, const Path& z) {
    return affine(std::exp(-u), w, sigma(u), z);
}

MCEstimate semigroup_apply(const Functional& f, double u, const Path& w,
                           const MCSpec& mc) {
    if (u < 0.0) throw std::invalid_argument("semigroup_apply: negative u");
    if (u == 0.0) return MCEstimate{f(w), 0.0, mc.n, mc.seed};
    const double a = std::exp(-u);
    const double b = sigma(u);
    std::vector<double> buf;
    if (const auto& ls = f.linear_stat()) {
        detail::StatStream stream(*ls, mc.level);
        const double sw = ls->stat(w);
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            return ls->q(a * sw + b * stream(mc.seed, i));
        });
    } else {
        fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
            return f(ou_push(w, u, detail::sample_path(mc.level, mc.seed, i)));
        });
    }
    return summarize(buf, mc.seed);
}

std::vector<MCEstimate> pointwise_gap(const Functional& f, const Path& w,
                                      std::span<const double> u_list,
                                      const MCSpec& mc) {
    const double fw = f(w);
    std::vector<MCEstimate> out;
    out.reserve(u_list.size());
    for (double u : u_list) {
        // same (seed, i) stream for every u: CRN coupling
        MCEstimate est = semigroup_apply(f, u, w, mc);
        est.mean = std::abs(est.mean - fw);
        out.push_back(est);
    }
    return out;
}

RemainderFit taylor_remainder_probe(const Functional& f, const Path& w,
                                    std::span<const double> u_list,
                                    const MCSpec& mc) {
    if (!f.has_derivatives())
        throw DerivativesUnavailable(f.name() + ": remainder probe needs derivatives");
    const double fw = f(w);
    RemainderFit fit;
    fit.u.assign(u_list.begin(), u_list.end());

    const auto& ls = f.linear_stat();
    std::optional<detail::StatStream> stream;
    double sw = 0.0;
    if (ls) {
        stream.emplace(*ls, mc.level);
        sw = ls->stat(w);
    }
    const double gww = ls ? ls->dq(sw) * sw : f.grad_dir(w, w);
    const double hww = ls ? ls->ddq(sw) * sw * sw : f.hess_dir(w, w, w);

    std::vector<double> buf;
    for (double u : u_list) {
        const double a = std::exp(-u);
        const double b = sigma(u);
        const double c = 1.0 - a; // shift coefficient: d = b Z - c w
        if (ls) {
            fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
                const double si = (*stream)(mc.seed, i);
                const double ds = b * si - c * sw;
                return ls->q(sw + ds) - fw - ls->dq(sw) * ds -
                       0.5 * ls->ddq(sw) * ds * ds;
            });
        } else {
            fill_samples(buf, mc.n, mc.exec, [&](std::size_t i) {
                const Path z = detail::sample_path(mc.level, mc.seed, i);
                const Path pushed = ou_push(w, u, z);
                const double gz = f.grad_dir(w, z);
                const double hzz = f.hess_dir(w, z, z);
                const double hzw = f.hess_dir(w, z, w);
                return f(pushed) - fw - (b * gz - c * gww) -
                       0.5 * (b * b * hzz - 2.0 * b * c * hzw + c * c * hww);
            });
        }
        const MCEstimate est = summarize(buf, mc.seed);
        fit.remainder.push_back(std::abs(est.mean));
        fit.stderr_.push_back(est.stderr_);
    }

    // keep points that stand clear of the MC noise and of round-off
    const double abs_floor = 1e-12 * (1.0 + std::abs(fw));
    std::vector<double> lx, ly;
    const double wn = w.sup_norm();
    for (std::size_t i = 0; i < fit.u.size(); ++i) {
        const double r = fit.remainder[i];
        if (r > 3.0 * fit.stderr_[i] && r > abs_floor) {
            lx.push_back(std::log(fit.u[i]));
            ly.push_back(std::log(r));
            fit.k1_estimate = std::max(
                fit.k1_estimate,
                r / ((1.0 + wn * wn * wn) * std::pow(fit.u[i], 1.5)));
        }
    }
    if (lx.size() < fit.u.size() / 2 + 1) {
        fit.below_noise_floor = true;
        return fit;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.slope = sxy / sxx;
    return fit;
}

} // namespace oustein
