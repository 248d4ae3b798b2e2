// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "oustein/mc.hpp"
#include "oustein/path.hpp"

namespace oustein {

/// Witness family for the failure of strong continuity: the constant path
/// k*pi together with u_k = -log(1 - 1/(2k)), so that e^{-u_k} k pi lands
/// exactly on k pi - pi/2.
struct Witness {
    int k;
    Path path;
    double u;
};

Witness witness(int k, int level);

/// |sin(e^{-u_k} k pi) - sin(k pi)|; equals 1 for every k >= 1.
double deterministic_gap(int k);

/// Noise-free surrogate (1 + (k pi - pi/2)^3) / (1 + (k pi)^3) for gap_ratio.
double gap_ratio_surrogate(int k);

/// |T_{u_k} f(w_k) - f(w_k)| / (1 + ||w_k||^3) for f = (1+||w||^3) sin||w||.
/// f(w_k) = 0 exactly since sin(k pi) = 0.
MCEstimate gap_ratio(int k, const MCSpec& mc);

struct CounterexampleRow {
    int k;
    double u;
    double ratio;
    double stderr_;
    double surrogate;
};

struct CounterexampleReport {
    std::vector<CounterexampleRow> rows;          // no decay along u_k -> 0
    std::vector<double> u_small;
    std::vector<double> pointwise_gaps;           // weighted decay at a fixed path
    std::vector<double> pointwise_stderr;
    // Supporting estimates for the two vanishing terms of the decomposition.
    std::vector<double> cubic_term_mc;            // weighted cubic-difference term
    std::vector<double> cubic_term_envelope;      // closed-form moment envelope
    std::vector<double> sin_term_mc;              // |E sin||push|| - sin(e^{-u}||w||)|

    nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;
};

CounterexampleReport counterexample_report(std::span<const int> k_list,
                                           std::span<const double> u_small_list,
                                           const MCSpec& mc);

/// Value of the polynomial moment envelope dominating the cubic-difference
/// term, evaluated with the cached ||Z|| moments.
double cubic_term_envelope(double u, double w_norm);

} // namespace oustein
