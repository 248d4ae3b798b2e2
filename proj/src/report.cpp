// SPDX-License-Identifier: Apache-2.0
#include "oustein/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace oustein {

double round12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

nlohmann::json jnum(double x) { return round12(x); }

std::string dump_report(const nlohmann::json& report) {
    return report.dump(2) + "\n"; // nlohmann::json keeps keys sorted
}

void emit_report(const nlohmann::json& report, const std::string& format,
                 const std::string& target, const std::string& csv_text) {
    std::string payload;
    if (format == "json") {
        payload = dump_report(report);
    } else if (format == "csv") {
        if (csv_text.empty())
            throw std::invalid_argument("emit_report: no CSV form for this report");
        payload = csv_text;
    } else {
        throw std::invalid_argument("emit_report: unknown format '" + format + "'");
    }
    if (target.empty() || target == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_report: cannot open '" + target + "'");
    out << payload;
    if (!out) throw std::runtime_error("emit_report: write failed for '" + target + "'");
}

} // namespace oustein
