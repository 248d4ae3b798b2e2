// SPDX-License-Identifier: Apache-2.0
#include "oustein/functionals.hpp"

#include <cmath>

namespace oustein {

double Functional::grad_dir(const Path& w, const Path& h) const {
    if (!grad_)
        throw DerivativesUnavailable(name_ + ": derivatives unavailable");
    return grad_(w, h);
}

double Functional::hess_dir(const Path& w, const Path& h1, const Path& h2) const {
    if (!hess_)
        throw DerivativesUnavailable(name_ + ": derivatives unavailable");
    return hess_(w, h1, h2);
}

Functional terminal_square() {
    Functional f(
        "terminal_square",
        [](const Path& w) { return w.terminal() * w.terminal() - 1.0; },
        GrowthInfo{1.2, 1.0, 0.0});
    f.with_derivatives(
        [](const Path& w, const Path& h) { return 2.0 * w.terminal() * h.terminal(); },
        [](const Path&, const Path& h1, const Path& h2) {
            return 2.0 * h1.terminal() * h2.terminal();
        },
        /*constant_hessian=*/true);
    f.with_linear_stat(LinearStat{
        [](const Path& w) { return w.terminal(); },
        [](double s) { return s * s - 1.0; },
        [](double s) { return 2.0 * s; },
        [](double) { return 2.0; }});
    return f;
}

Functional terminal_linear() {
    Functional f(
        "terminal_linear", [](const Path& w) { return w.terminal(); },
        GrowthInfo{0.6, 1.0, 0.0});
    f.with_derivatives(
        [](const Path&, const Path& h) { return h.terminal(); },
        [](const Path&, const Path&, const Path&) { return 0.0; },
        /*constant_hessian=*/true);
    f.with_linear_stat(LinearStat{
        [](const Path& w) { return w.terminal(); },
        [](double s) { return s; },
        [](double) { return 1.0; },
        [](double) { return 0.0; }});
    return f;
}

Functional integral_square() {
    Functional f(
        "integral_square",
        [](const Path& w) {
            const double s = w.integral();
            return s * s - 1.0 / 3.0;
        },
        GrowthInfo{0.75, 1.0, 0.0});
    f.with_derivatives(
        [](const Path& w, const Path& h) { return 2.0 * w.integral() * h.integral(); },
        [](const Path&, const Path& h1, const Path& h2) {
            return 2.0 * h1.integral() * h2.integral();
        },
        /*constant_hessian=*/true);
    f.with_linear_stat(LinearStat{
        [](const Path& w) { return w.integral(); },
        [](double s) { return s * s - 1.0 / 3.0; },
        [](double s) { return 2.0 * s; },
        [](double) { return 2.0; }});
    return f;
}

Functional terminal_cube() {
    Functional f(
        "terminal_cube",
        [](const Path& w) {
            const double s = w.terminal();
            return s * s * s;
        },
        GrowthInfo{1.0, 1.5, 0.0});
    f.with_derivatives(
        [](const Path& w, const Path& h) {
            return 3.0 * w.terminal() * w.terminal() * h.terminal();
        },
        [](const Path& w, const Path& h1, const Path& h2) {
            return 6.0 * w.terminal() * h1.terminal() * h2.terminal();
        },
        /*constant_hessian=*/false);
    f.with_linear_stat(LinearStat{
        [](const Path& w) { return w.terminal(); },
        [](double s) { return s * s * s; },
        [](double s) { return 3.0 * s * s; },
        [](double s) { return 6.0 * s; }});
    return f;
}

Functional counterexample_functional() {
    // Not Frechet differentiable at norm-active corners; evaluation only.
    return Functional(
        "counterexample_sin",
        [](const Path& w) {
            const double r = w.sup_norm();
            return (1.0 + r * r * r) * std::sin(r);
        },
        GrowthInfo{1.0, std::nullopt, std::nullopt});
}

Functional scaled(const Functional& f, double a) {
    GrowthInfo info = f.info();
    info.L_bound *= std::abs(a);
    if (info.C_g) info.C_g = *info.C_g * std::abs(a);
    if (info.mean_under_Z) info.mean_under_Z = *info.mean_under_Z * a;
    Functional out(
        f.name() + "_scaled", [f, a](const Path& w) { return a * f(w); }, info);
    if (f.has_derivatives()) {
        out.with_derivatives(
            [f, a](const Path& w, const Path& h) { return a * f.grad_dir(w, h); },
            [f, a](const Path& w, const Path& h1, const Path& h2) {
                return a * f.hess_dir(w, h1, h2);
            },
            f.constant_hessian());
    }
    if (f.linear_stat()) {
        const LinearStat ls = *f.linear_stat();
        out.with_linear_stat(LinearStat{
            ls.stat,
            [q = ls.q, a](double s) { return a * q(s); },
            [dq = ls.dq, a](double s) { return a * dq(s); },
            [ddq = ls.ddq, a](double s) { return a * ddq(s); }});
    }
    return out;
}

Functional linear_combination(double a, const Functional& f,
                              double b, const Functional& g) {
    GrowthInfo info;
    info.L_bound = std::abs(a) * f.info().L_bound + std::abs(b) * g.info().L_bound;
    if (f.info().C_g && g.info().C_g)
        info.C_g = std::abs(a) * *f.info().C_g + std::abs(b) * *g.info().C_g;
    if (f.info().mean_under_Z && g.info().mean_under_Z)
        info.mean_under_Z = a * *f.info().mean_under_Z + b * *g.info().mean_under_Z;
    Functional out(
        "combo(" + f.name() + "," + g.name() + ")",
        [f, g, a, b](const Path& w) { return a * f(w) + b * g(w); }, info);
    if (f.has_derivatives() && g.has_derivatives()) {
        out.with_derivatives(
            [f, g, a, b](const Path& w, const Path& h) {
                return a * f.grad_dir(w, h) + b * g.grad_dir(w, h);
            },
            [f, g, a, b](const Path& w, const Path& h1, const Path& h2) {
                return a * f.hess_dir(w, h1, h2) + b * g.hess_dir(w, h1, h2);
            },
            f.constant_hessian() && g.constant_hessian());
    }
    return out;
}

const std::map<std::string, Functional (*)()>& functional_registry() {
    static const std::map<std::string, Functional (*)()> reg = {
        {"terminal_square", &terminal_square},
        {"terminal_linear", &terminal_linear},
        {"integral_square", &integral_square},
        {"terminal_cube", &terminal_cube},
        {"counterexample_sin", &counterexample_functional},
    };
    return reg;
}

Functional functional_by_name(const std::string& name) {
    const auto& reg = functional_registry();
    auto it = reg.find(name);
    if (it == reg.end()) {
        std::string known;
        for (const auto& [k, v] : reg) known += (known.empty() ? "" : ", ") + k;
        throw std::invalid_argument("unknown functional '" + name +
                                    "'; known: " + known);
    }
    return it->second();
}

double fd_grad(const Functional& f, const Path& w, const Path& h,
               const FDSpec& spec) {
    const double hn = h.sup_norm();
    if (hn == 0.0) throw std::invalid_argument("fd_grad: zero direction");
    const double eps = spec.eps1 * std::max(1.0, w.sup_norm()) / hn;
    const double fp = f(affine(1.0, w, eps, h));
    const double fm = f(affine(1.0, w, -eps, h));
    return (fp - fm) / (2.0 * eps);
}

double fd_hess(const Functional& f, const Path& w, const Path& h,
               const FDSpec& spec) {
    const double hn = h.sup_norm();
    if (hn == 0.0) throw std::invalid_argument("fd_hess: zero direction");
    const double eps = spec.eps2 * std::max(1.0, w.sup_norm()) / hn;
    const double fp = f(affine(1.0, w, eps, h));
    const double fm = f(affine(1.0, w, -eps, h));
    return (fp - 2.0 * f(w) + fm) / (eps * eps);
}

} // namespace oustein
