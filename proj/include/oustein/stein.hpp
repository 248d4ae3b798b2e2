// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "oustein/functionals.hpp"
#include "oustein/mc.hpp"
#include "oustein/path.hpp"
#include "oustein/quadrature.hpp"

namespace oustein {

struct SteinReport {
    double value = 0.0;
    double stderr_ = 0.0;
    double tail_bound = 0.0;
    std::optional<double> residual;
    double tolerance = 0.0;
    int truncation_level = -1;
    bool pass = true;
    std::string what;

    nlohmann::json to_json() const;
};

/// A f(w) = -Df(w)[w] + sum_{k < 2^{J+1}} D2f(w)[S_k,S_k].
double stein_operator_series(const Functional& f, const Path& w, int j_trunc);

/// A f(w) = -Df(w)[w] + mean_i D2f(w)[Z_i,Z_i].
MCEstimate stein_operator_mc(const Functional& f, const Path& w, const MCSpec& mc);

/// phi(g)(w) = -int_0^inf T_u g(w) du by composite Gauss-Legendre on
/// [0, u_max] with one Z stream across all nodes. The integrand is centered
/// per sample by g(Z_i) - E g(Z), which leaves the mean unchanged and makes
/// the tail pathwise integrable. Requires mean_under_Z declared; the
/// truncation tail is reported via a C_g-driven e^{-u_max} envelope, never
/// silently added.
SteinReport stein_solution(const Functional& g, const Path& w,
                           const QuadratureSpec& quad, double tolerance = 0.02);

/// D^k phi(g)(w)[h(,h)] = -int_0^inf e^{-ku} E D^k g(push)[h(,h)] du.
double stein_solution_derivative(const Functional& g, const Path& w,
                                 const Path& h, int order,
                                 const QuadratureSpec& quad);

/// Residual of T_t g - g = A (int_0^t T_u g du).
SteinReport lemma3_check(const Functional& g, const Path& w, double t,
                         const QuadratureSpec& quad, int j_trunc,
                         double tolerance = 0.02);

/// Residual of T_r f(w) - f(w) = int_0^r T_s A f(w) ds.
SteinReport ftc_check(const Functional& f, const Path& w, double r,
                      const QuadratureSpec& quad, int j_trunc = 8,
                      double tolerance = 0.02);

/// Residual of the Stein equation: A phi(g)(w) - g(w).
SteinReport stein_residual(const Functional& g, const Path& w,
                           const QuadratureSpec& quad, int j_trunc,
                           double tolerance = 0.02);

struct GrowthReport {
    std::vector<double> norms;   // ||w|| per probe path
    std::vector<double> ratios;  // int_0^{u_max} |T_u g(w)| du / (1+||w||^3)
    double max_ratio = 0.0;
    bool bounded = true;         // no growth trend in ||w||
    nlohmann::json to_json() const;
};

GrowthReport growth_probe(const Functional& g, std::span<const Path> w_set,
                          const QuadratureSpec& quad);

struct LipschitzReport {
    double worst_ratio = 0.0;
    double declared_c = 0.0;
    std::size_t pairs = 0;
    bool pass = true;
    std::optional<std::pair<double, double>> witness_norms;
    nlohmann::json to_json() const;
};

/// Samples path pairs (Brownian samples mixed with scaled constants) and
/// checks |g(w)-g(x)| <= C_g (1+||w||^2+||x||^2) ||w-x||.
LipschitzReport lipschitz_probe(const Functional& g, std::size_t n_pairs,
                                std::uint64_t seed);

} // namespace oustein
