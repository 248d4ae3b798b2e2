// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace oustein {

/// Round to 12 significant digits so reports are byte-stable across runs.
double round12(double x);

/// Number ready for report JSON (rounded to 12 significant digits).
nlohmann::json jnum(double x);

/// Serialize with sorted keys and fixed layout. Identical inputs yield
/// byte-identical output.
std::string dump_report(const nlohmann::json& report);

/// Write to a file path or "-" for stdout. Throws on unwritable targets.
void emit_report(const nlohmann::json& report, const std::string& format,
                 const std::string& target, const std::string& csv_text = "");

} // namespace oustein
