// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "oustein/path.hpp"

namespace oustein {

struct DerivativesUnavailable : std::runtime_error {
    explicit DerivativesUnavailable(const std::string& what)
        : std::runtime_error(what) {}
};

/// Representation g(w) = q(s(w)) with s linear in w. When present, the
/// Monte-Carlo engines evaluate pushed paths through the scalar statistic
/// instead of materializing grids; the Path route stays available and the
/// two are cross-checked in tests.
struct LinearStat {
    std::function<double(const Path&)> stat;
    std::function<double(double)> q;
    std::function<double(double)> dq;
    std::function<double(double)> ddq;
};

struct GrowthInfo {
    double L_bound = 0.0;                 // |f(w)| <= L_bound (1 + ||w||^3)
    std::optional<double> C_g;            // Lipschitz-type constant
    std::optional<double> mean_under_Z;   // E f(Z) when known
};

/// Evaluatable map Path -> real with optional exact directional derivatives
/// and declared growth constants. Pure and stateless; safe to share.
class Functional {
public:
    using EvalFn = std::function<double(const Path&)>;
    using GradFn = std::function<double(const Path&, const Path&)>;
    using HessFn = std::function<double(const Path&, const Path&, const Path&)>;

    Functional(std::string name, EvalFn eval, GrowthInfo info)
        : name_(std::move(name)), eval_(std::move(eval)), info_(info) {}

    Functional& with_derivatives(GradFn grad, HessFn hess, bool constant_hessian) {
        grad_ = std::move(grad);
        hess_ = std::move(hess);
        constant_hessian_ = constant_hessian;
        return *this;
    }

    Functional& with_linear_stat(LinearStat ls) {
        lin_ = std::move(ls);
        return *this;
    }

    const std::string& name() const { return name_; }
    double operator()(const Path& w) const { return eval_(w); }

    bool has_derivatives() const { return static_cast<bool>(grad_); }
    bool constant_hessian() const { return constant_hessian_; }
    const std::optional<LinearStat>& linear_stat() const { return lin_; }
    const GrowthInfo& info() const { return info_; }

    /// Df(w)[h]; throws DerivativesUnavailable when no closed form exists.
    double grad_dir(const Path& w, const Path& h) const;
    /// D2f(w)[h1,h2].
    double hess_dir(const Path& w, const Path& h1, const Path& h2) const;

private:
    std::string name_;
    EvalFn eval_;
    GradFn grad_;
    HessFn hess_;
    std::optional<LinearStat> lin_;
    GrowthInfo info_;
    bool constant_hessian_ = false;
};

// Library functionals.
Functional terminal_square();          // g(w) = w(1)^2 - 1
Functional terminal_linear();          // g(w) = w(1)
Functional integral_square();          // g(w) = (int_0^1 w)^2 - 1/3
Functional terminal_cube();            // g(w) = w(1)^3
Functional counterexample_functional();// f(w) = (1+||w||^3) sin(||w||)

/// a * f, preserving derivatives and the linear-stat form.
Functional scaled(const Functional& f, double a);
/// a*f + b*g; derivatives combine when both operands expose them.
Functional linear_combination(double a, const Functional& f,
                              double b, const Functional& g);

/// Functionals addressable by name from the CLI.
const std::map<std::string, Functional (*)()>& functional_registry();
Functional functional_by_name(const std::string& name); // throws on unknown

struct FDSpec {
    double eps1 = 1e-5; // relative step, first differences
    double eps2 = 1e-4; // relative step, second differences
};

/// Central difference (f(w+eh) - f(w-eh)) / 2e with e = eps1 max(1,||w||)/||h||.
double fd_grad(const Functional& f, const Path& w, const Path& h,
               const FDSpec& spec = {});
/// Second central difference (f(w+eh) - 2f(w) + f(w-eh)) / e^2.
double fd_hess(const Functional& f, const Path& w, const Path& h,
               const FDSpec& spec = {});

} // namespace oustein
