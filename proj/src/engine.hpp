// SPDX-License-Identifier: Apache-2.0
// Internal sampling helpers shared by the semigroup and Stein estimators.
#pragma once

#include <cstdint>
#include <vector>

#include "oustein/functionals.hpp"
#include "oustein/mc.hpp"
#include "oustein/rng.hpp"
#include "oustein/schauder.hpp"

namespace oustein::detail {

/// Evaluates a linear statistic on Brownian samples directly in coefficient
/// space: s(Z_i) = sum_k xi_k(i) s(S_k). No grids are materialized.
class StatStream {
public:
    StatStream(const LinearStat& ls, int level) : level_(level) {
        const SchauderTable& table = SchauderTable::cached(level);
        basis_weights_.resize(table.size());
        for (std::size_t k = 0; k < table.size(); ++k)
            basis_weights_[k] = ls.stat(table[k]);
    }

    double operator()(std::uint64_t seed, std::size_t i) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < basis_weights_.size(); ++k) {
            if (basis_weights_[k] == 0.0) continue;
            acc += counter_normal(seed, i, k) * basis_weights_[k];
        }
        return acc;
    }

    /// sum_k s(S_k)^2, the Parseval weight of the statistic.
    double parseval_sum() const {
        double acc = 0.0;
        for (double v : basis_weights_) acc += v * v;
        return acc;
    }

    int level() const { return level_; }

private:
    int level_;
    std::vector<double> basis_weights_;
};

inline Path sample_path(int level, std::uint64_t seed, std::size_t i) {
    return sample_brownian(level, seed, static_cast<std::uint64_t>(i)).path;
}

} // namespace oustein::detail
