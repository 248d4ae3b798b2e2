// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace oustein {

struct SuiteOptions {
    std::uint64_t seed = 7;
    std::string fixture_dir; // location of counterexample_floors.json
};

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    nlohmann::json details;
};

/// Runs the full verification battery (closed-form Stein solutions, operator
/// residuals, the two semigroup identities, the counterexample, basis and
/// sampler diagnostics, derivative cross-checks, remainder/growth probes and
/// the determinism check). Returns a report with one entry per criterion.
nlohmann::json run_suite(const SuiteOptions& opts);

bool suite_passed(const nlohmann::json& report);

} // namespace oustein
