// SPDX-License-Identifier: Apache-2.0
//
// Acceptance battery: runs the full verification suite and prints one
// [PASS]/[FAIL] line per criterion. Exit 0 iff every criterion passes.

#include <cstdio>

#include "oustein/suite.hpp"

int main() {
    oustein::SuiteOptions opts;
    opts.seed = 7;
    opts.fixture_dir = OUSTEIN_FIXTURE_DIR;
    const nlohmann::json report = oustein::run_suite(opts);
    for (const auto& c : report.at("criteria")) {
        std::printf("[%s] %2d %s\n", c.at("pass").get<bool>() ? "PASS" : "FAIL",
                    c.at("id").get<int>(),
                    c.at("name").get<std::string>().c_str());
        if (!c.at("pass").get<bool>())
            std::printf("       details: %s\n", c.at("details").dump().c_str());
    }
    return oustein::suite_passed(report) ? 0 : 1;
}
