// SPDX-License-Identifier: Apache-2.0
#include "oustein/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oustein {

std::vector<std::pair<double, double>> gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");
    std::vector<std::pair<double, double>> out(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        out[i] = {-x, w};
        out[order - 1 - i] = {x, w};
    }
    return out;
}

PanelRule composite_gauss_legendre(double a, double b, int panels, int order) {
    if (!(b > a)) throw std::invalid_argument("composite_gauss_legendre: b <= a");
    if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels < 1");
    const auto base = gauss_legendre(order);
    PanelRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
    rule.weights.reserve(static_cast<std::size_t>(panels) * order);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        for (const auto& [x, w] : base) {
            rule.nodes.push_back(lo + 0.5 * width * (x + 1.0));
            rule.weights.push_back(0.5 * width * w);
        }
    }
    return rule;
}

} // namespace oustein
