// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "oustein/functionals.hpp"
#include "oustein/mc.hpp"
#include "oustein/path.hpp"

namespace oustein {

/// sigma(u) = sqrt(1 - e^{-2u}); throws on u < 0.
double sigma(double u);

/// w e^{-u} + sigma(u) z.
Path ou_push(const Path& w, double u, const Path& z);

/// Monte-Carlo estimate of (T_u f)(w) = E f(w e^{-u} + sigma(u) Z).
/// T_0 is the identity and returns f(w) with zero variance.
MCEstimate semigroup_apply(const Functional& f, double u, const Path& w,
                           const MCSpec& mc);

/// |T_u f(w) - f(w)| per u, all u sharing one Z stream (CRN).
std::vector<MCEstimate> pointwise_gap(const Functional& f, const Path& w,
                                      std::span<const double> u_list,
                                      const MCSpec& mc);

struct RemainderFit {
    bool below_noise_floor = false;
    double slope = 0.0;        // fitted log-log exponent
    double k1_estimate = 0.0;  // max R(u) / ((1+||w||^3) u^{3/2})
    std::vector<double> u;
    std::vector<double> remainder;
    std::vector<double> stderr_;
};

/// Second-order Taylor remainder of T_u f at w over a u grid, with CRN:
/// R(u) = |T_u f(w) - f(w) - E Df(w)[d] - E D2f(w)[d,d]/2|,
/// d = sigma(u) Z - w (1 - e^{-u}). Fits log R against log u when the
/// remainder is distinguishable from Monte-Carlo noise.
RemainderFit taylor_remainder_probe(const Functional& f, const Path& w,
                                    std::span<const double> u_list,
                                    const MCSpec& mc);

} // namespace oustein
