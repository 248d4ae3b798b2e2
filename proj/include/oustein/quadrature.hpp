// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "oustein/mc.hpp"

namespace oustein {

/// Gauss-Legendre nodes and weights on [-1,1].
std::vector<std::pair<double, double>> gauss_legendre(int order);

struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Composite Gauss-Legendre rule on [a,b].
PanelRule composite_gauss_legendre(double a, double b, int panels, int order);

/// Node placement and cutoffs for int_0^inf T_u g du and the Schauder series.
/// CRN across nodes is mandatory: the integrand at different u is always
/// evaluated on one shared Z stream.
struct QuadratureSpec {
    double u_max = 20.0;
    int panels = 64;
    int nodes_per_panel = 8;
    MCSpec mc;
};

} // namespace oustein
